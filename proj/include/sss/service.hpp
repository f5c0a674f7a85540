#pragma once

#include <sss/session.hpp>

#include <json.hpp>

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <string>

namespace httplib
{
    class Server;
}

namespace sss
{
    /// An error with the HTTP status it should map to.
    class HttpError : public Error
    {
    public:
        HttpError(int status, const std::string& message) : Error(message), status_(status) {}
        int status() const { return status_; }

    private:
        int status_;
    };

    struct ServiceOptions
    {
        int                  dimension  = 16;
        int                  candidates = 4;
        int                  resolution = 64;
        AcquisitionConfig    acquisition;
        std::chrono::seconds idle_timeout{30 * 60};
    };

    /// In-memory session store behind the HTTP API. Handlers take and return JSON bodies and
    /// throw HttpError for client mistakes. Steps on one session are serialized; blends and
    /// descriptor reads may run concurrently with each other.
    class SessionService
    {
    public:
        explicit SessionService(ServiceOptions options);

        /// POST /sessions {d?, c?, seed?, sigma1?, sigma2?}
        nlohmann::json create_session(const nlohmann::json& body);
        /// GET /sessions/{id}
        nlohmann::json describe(const std::string& id);
        /// POST /sessions/{id}/blend {sliders}
        nlohmann::json blend(const std::string& id, const nlohmann::json& body);
        /// POST /sessions/{id}/step {sliders, edits}
        nlohmann::json step(const std::string& id, const nlohmann::json& body);
        /// DELETE /sessions/{id}
        void remove(const std::string& id);

        std::size_t size();
        /// Drops sessions idle for longer than the configured timeout.
        void expire_idle(std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now());

        /// Latent state of a session, for in-process inspection.
        SessionState snapshot(const std::string& id);

    private:
        struct Live
        {
            SessionConfig                         config;
            SessionState                          state;
            std::shared_mutex                     lock;
            std::mutex                            touch_lock;
            std::chrono::steady_clock::time_point last_used;

            void touch();
        };

        std::shared_ptr<Live> find(const std::string& id);
        nlohmann::json        candidate_images(const Live& live) const;

        ServiceOptions                               options_;
        std::mutex                                   store_lock_;
        std::map<std::string, std::shared_ptr<Live>> sessions_;
        std::mt19937_64                              id_rng_;
    };

    /// Registers /health and the /sessions routes on `server`.
    void install_routes(httplib::Server& server, SessionService& service);
} // namespace sss
