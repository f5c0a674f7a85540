#pragma once

#include <sss/acquisition.hpp>
#include <sss/test_functions.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sss
{
    enum class Method
    {
        sliders_bo,      // c sliders, constant-liar BO candidates
        slider1_bo,      // one slider: previous choice plus one BO candidate
        random_sampling, // c sliders, random candidates
        pointwise_bo     // value-observation BO with the same evaluation budget
    };

    struct MethodSpec
    {
        Method method     = Method::sliders_bo;
        int    candidates = 4; // c; also sets the point-wise budget per round

        /// "sliders4", "slider1", "random", "pointwise"
        static MethodSpec parse(std::string_view name);
        std::string       name() const;
        /// Number of sliders the simulated user sees.
        int slider_count() const;
    };

    struct StudyConfig
    {
        TestFunction               function;
        MethodSpec                 method;
        int                        iterations = 20;
        std::vector<std::uint64_t> seeds{1};
        int                        oracle_resolution = 15;
        AcquisitionConfig          acquisition{0.0, 0.0, 8, 100, 1e-3};

        void validate() const;
    };

    struct StudyResult
    {
        Eigen::MatrixXd residuals; // seeds x iterations
        Eigen::VectorXd mean;      // per iteration
        Eigen::VectorXd stddev;    // per iteration, sample standard deviation (0 for one seed)
    };

    /// |x - x_hat|^2
    double residual(const LatentVector& x, const LatentVector& x_hat);

    /// Simulated user: simplex weights approximately minimizing f over the convex hull of the
    /// candidates (lattice search at `resolution` steps per edge, then pairwise mass exchange with
    /// a 1-d Brent search until no pair improves).
    Weights oracle_select(const TestFunction& fn, const std::vector<LatentVector>& candidates, int resolution);

    /// Residual of the best point found so far, recorded after every round.
    std::vector<double> run_trial(const StudyConfig& config, std::uint64_t seed);

    StudyResult run_study(const StudyConfig& config);

    /// Same as run_trial, also reporting the number of objective evaluations the candidates cost.
    struct TrialTrace
    {
        std::vector<double> residuals;
        std::size_t         evaluations = 0;
    };
    TrialTrace run_trial_traced(const StudyConfig& config, std::uint64_t seed);
} // namespace sss
