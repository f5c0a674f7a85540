#include <sss/codec.hpp>
#include <sss/service.hpp>

#include <httplib.h>

#include <iomanip>
#include <sstream>

namespace sss
{
    namespace
    {
        using nlohmann::json;

        Eigen::VectorXd parse_sliders(const json& body, std::size_t count)
        {
            if (!body.is_object() || !body.contains("sliders") || !body["sliders"].is_array())
            {
                throw HttpError(400, "body must contain a 'sliders' array");
            }
            const auto& arr = body["sliders"];
            if (arr.size() != count)
            {
                throw HttpError(400, "expected " + std::to_string(count) + " slider values");
            }
            Eigen::VectorXd s(static_cast<Eigen::Index>(count));
            for (std::size_t i = 0; i < count; ++i)
            {
                if (!arr[i].is_number())
                {
                    throw HttpError(400, "slider values must be numbers");
                }
                s(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
            }
            try
            {
                blend_weights(s);
            }
            catch (const Error& e)
            {
                throw HttpError(422, e.what());
            }
            return s;
        }

        EditKind parse_kind(const std::string& kind)
        {
            if (kind == "paint")
            {
                return EditKind::paint;
            }
            if (kind == "erase")
            {
                return EditKind::erase;
            }
            if (kind == "keep")
            {
                return EditKind::keep;
            }
            if (kind == "paste")
            {
                return EditKind::paste;
            }
            throw HttpError(400, "unknown edit kind: " + kind);
        }

        EditOp parse_edit(const json& e, int width, int height)
        {
            if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string() || !e.contains("region_bitmap_base64") ||
                !e["region_bitmap_base64"].is_string())
            {
                throw HttpError(400, "edit needs 'kind' and 'region_bitmap_base64'");
            }
            EditOp op;
            op.kind = parse_kind(e["kind"].get<std::string>());
            try
            {
                op.region = decode_region_bitmap(base64_decode(e["region_bitmap_base64"].get<std::string>()), width, height);
                if (op.kind == EditKind::paint)
                {
                    if (!e.contains("color") || !e["color"].is_array() || e["color"].size() != 3)
                    {
                        throw HttpError(400, "paint edit needs a 3-element 'color'");
                    }
                    Rgb c{};
                    for (std::size_t i = 0; i < 3; ++i)
                    {
                        if (!e["color"][i].is_number())
                        {
                            throw HttpError(400, "color components must be numbers");
                        }
                        c[i] = e["color"][i].get<double>();
                    }
                    op.color = c;
                }
                if (op.kind == EditKind::paste)
                {
                    if (!e.contains("patch_png_base64") || !e["patch_png_base64"].is_string())
                    {
                        throw HttpError(400, "paste edit needs 'patch_png_base64'");
                    }
                    op.patch = decode_png(base64_decode(e["patch_png_base64"].get<std::string>()));
                }
            }
            catch (const HttpError&)
            {
                throw;
            }
            catch (const Error& err)
            {
                throw HttpError(400, err.what());
            }
            return op;
        }

        template <class T> T optional_field(const json& body, const char* key, T fallback)
        {
            if (!body.contains(key))
            {
                return fallback;
            }
            const auto& v = body[key];
            if constexpr (std::is_integral_v<T>)
            {
                if (!v.is_number_integer())
                {
                    throw HttpError(400, std::string("'") + key + "' must be an integer");
                }
            }
            else
            {
                if (!v.is_number())
                {
                    throw HttpError(400, std::string("'") + key + "' must be a number");
                }
            }
            return v.get<T>();
        }

        json parse_body(const httplib::Request& req)
        {
            if (req.body.empty())
            {
                return json::object();
            }
            try
            {
                return json::parse(req.body);
            }
            catch (const json::exception& e)
            {
                throw HttpError(400, std::string("malformed JSON: ") + e.what());
            }
        }

        template <class Handler> void guarded(httplib::Response& res, Handler&& handler)
        {
            try
            {
                handler();
            }
            catch (const HttpError& e)
            {
                res.status = e.status();
                res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            }
            catch (const std::exception& e)
            {
                res.status = 500;
                res.set_content(json{{"error", e.what()}}.dump(), "application/json");
            }
        }
    } // namespace

    void SessionService::Live::touch()
    {
        std::lock_guard guard(touch_lock);
        last_used = std::chrono::steady_clock::now();
    }

    SessionService::SessionService(ServiceOptions options) : options_(std::move(options)), id_rng_(std::random_device{}())
    {
        options_.acquisition.validate();
    }

    std::shared_ptr<SessionService::Live> SessionService::find(const std::string& id)
    {
        expire_idle();
        std::lock_guard guard(store_lock_);
        const auto      it = sessions_.find(id);
        if (it == sessions_.end())
        {
            throw HttpError(404, "unknown session: " + id);
        }
        it->second->touch();
        return it->second;
    }

    json SessionService::candidate_images(const Live& live) const
    {
        json images = json::array();
        for (const auto& z : live.state.candidates)
        {
            images.push_back(base64_encode(encode_png(live.config.generator->render(z))));
        }
        return images;
    }

    json SessionService::create_session(const json& body)
    {
        if (!body.is_object())
        {
            throw HttpError(400, "body must be a JSON object");
        }
        auto live = std::make_shared<Live>();
        auto& cfg = live->config;
        cfg.dimension       = optional_field<int>(body, "d", options_.dimension);
        cfg.candidate_count = optional_field<int>(body, "c", options_.candidates);
        cfg.acquisition     = options_.acquisition;
        cfg.acquisition.sigma1 = optional_field<double>(body, "sigma1", cfg.acquisition.sigma1);
        cfg.acquisition.sigma2 = optional_field<double>(body, "sigma2", cfg.acquisition.sigma2);
        cfg.prior           = PriorSpec::standard_normal();

        std::string id;
        {
            std::lock_guard guard(store_lock_);
            cfg.seed = optional_field<std::uint64_t>(body, "seed", id_rng_());
            std::ostringstream hex;
            hex << std::hex << std::setfill('0') << std::setw(16) << id_rng_() << std::setw(16) << id_rng_();
            id = hex.str();
        }
        try
        {
            cfg.generator = std::make_shared<ProceduralGenerator>(cfg.dimension, options_.resolution, options_.resolution);
            live->state   = create(cfg);
        }
        catch (const Error& e)
        {
            throw HttpError(400, e.what());
        }
        live->touch();

        json out = {{"id", id},
                    {"iteration", 0},
                    {"d", cfg.dimension},
                    {"c", cfg.candidate_count},
                    {"width", options_.resolution},
                    {"height", options_.resolution},
                    {"candidates", candidate_images(*live)}};
        std::lock_guard guard(store_lock_);
        sessions_.emplace(id, std::move(live));
        return out;
    }

    json SessionService::describe(const std::string& id)
    {
        auto              live = find(id);
        std::shared_lock  lock(live->lock);
        return {{"id", id},
                {"iteration", live->state.iteration},
                {"d", live->config.dimension},
                {"c", live->config.candidate_count},
                {"seed", live->config.seed},
                {"width", options_.resolution},
                {"height", options_.resolution},
                {"candidates", candidate_images(*live)}};
    }

    json SessionService::blend(const std::string& id, const json& body)
    {
        auto             live = find(id);
        std::shared_lock lock(live->lock);
        const auto       sliders = parse_sliders(body, live->state.candidates.size());
        const auto       z       = blended_latent(live->state.candidates, blend_weights(sliders));
        return {{"image_png_base64", base64_encode(encode_png(live->config.generator->render(z)))}};
    }

    json SessionService::step(const std::string& id, const json& body)
    {
        auto             live = find(id);
        std::unique_lock lock(live->lock);
        const auto       sliders = parse_sliders(body, live->state.candidates.size());

        std::vector<EditOp> edits;
        if (body.contains("edits"))
        {
            if (!body["edits"].is_array())
            {
                throw HttpError(400, "'edits' must be an array");
            }
            for (const auto& e : body["edits"])
            {
                edits.push_back(parse_edit(e, options_.resolution, options_.resolution));
            }
        }

        try
        {
            // Validate the edits against a throwaway guidance before the expensive step.
            GuidanceState probe = new_guidance(Image(options_.resolution, options_.resolution));
            for (const auto& op : edits)
            {
                probe = apply_edit(probe, op);
            }
        }
        catch (const Error& e)
        {
            throw HttpError(400, e.what());
        }

        live->state = sss::step(live->config, live->state, sliders, edits);
        live->touch();
        return {{"iteration", live->state.iteration}, {"candidates", candidate_images(*live)}};
    }

    void SessionService::remove(const std::string& id)
    {
        std::lock_guard guard(store_lock_);
        if (sessions_.erase(id) == 0)
        {
            throw HttpError(404, "unknown session: " + id);
        }
    }

    std::size_t SessionService::size()
    {
        std::lock_guard guard(store_lock_);
        return sessions_.size();
    }

    void SessionService::expire_idle(std::chrono::steady_clock::time_point now)
    {
        std::lock_guard guard(store_lock_);
        for (auto it = sessions_.begin(); it != sessions_.end();)
        {
            std::chrono::steady_clock::time_point last;
            {
                std::lock_guard touch(it->second->touch_lock);
                last = it->second->last_used;
            }
            if (now - last > options_.idle_timeout)
            {
                it = sessions_.erase(it);
            }
            else
            {
                ++it;
            }
        }
    }

    SessionState SessionService::snapshot(const std::string& id)
    {
        auto             live = find(id);
        std::shared_lock lock(live->lock);
        return live->state;
    }

    void install_routes(httplib::Server& server, SessionService& service)
    {
        server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(R"({"status":"ok"})", "application/json");
        });
        server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                const auto out = service.create_session(parse_body(req));
                res.status     = 201;
                res.set_content(out.dump(), "application/json");
            });
        });
        server.Get(R"(/sessions/([0-9a-f]+))", [&service](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] { res.set_content(service.describe(req.matches[1]).dump(), "application/json"); });
        });
        server.Post(R"(/sessions/([0-9a-f]+)/blend)", [&service](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                res.set_content(service.blend(req.matches[1], parse_body(req)).dump(), "application/json");
            });
        });
        server.Post(R"(/sessions/([0-9a-f]+)/step)", [&service](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                res.set_content(service.step(req.matches[1], parse_body(req)).dump(), "application/json");
            });
        });
        server.Delete(R"(/sessions/([0-9a-f]+))", [&service](const httplib::Request& req, httplib::Response& res) {
            guarded(res, [&] {
                service.remove(req.matches[1]);
                res.status = 204;
            });
        });
    }
} // namespace sss
