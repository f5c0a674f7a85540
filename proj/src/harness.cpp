#include <sss/harness.hpp>
#include <sss/session.hpp>

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <thread>

namespace sss
{
    namespace
    {
        // Calls visit(counts) for every composition of `total` into counts.size() parts.
        template <class Visit> void for_each_composition(std::vector<int>& counts, std::size_t slot, int remaining, Visit& visit)
        {
            if (slot + 1 == counts.size())
            {
                counts[slot] = remaining;
                visit(counts);
                return;
            }
            for (int k = remaining; k >= 0; --k)
            {
                counts[slot] = k;
                for_each_composition(counts, slot + 1, remaining - k, visit);
            }
        }

        SessionConfig session_config(const StudyConfig& config, std::uint64_t seed)
        {
            SessionConfig sc;
            sc.dimension           = config.function.dimension;
            sc.candidate_count     = config.method.slider_count() + (config.method.method == Method::slider1_bo ? 1 : 0);
            sc.prior               = PriorSpec::uniform(sc.dimension, 0.0, 1.0);
            sc.acquisition         = config.acquisition;
            sc.acquisition.sigma1  = 0.0;
            sc.seed                = seed;
            sc.strategy = config.method.method == Method::random_sampling ? CandidateStrategy::random
                                                                          : CandidateStrategy::bayesian;
            return sc;
        }

        std::vector<LatentVector> to_domain(const TestFunction& fn, const std::vector<LatentVector>& unit)
        {
            std::vector<LatentVector> out;
            out.reserve(unit.size());
            for (const auto& u : unit)
            {
                out.push_back(fn.from_unit(u));
            }
            return out;
        }

        struct BestSoFar
        {
            double       value = std::numeric_limits<double>::infinity();
            LatentVector point;

            void offer(const TestFunction& fn, const LatentVector& x)
            {
                const double f = evaluate(fn, x);
                if (f < value)
                {
                    value = f;
                    point = x;
                }
            }
        };

        TrialTrace run_subspace_trial(const StudyConfig& config, std::uint64_t seed)
        {
            const auto&   fn = config.function;
            SessionConfig sc = session_config(config, seed);
            SessionState  state = create(sc);

            TrialTrace trace;
            BestSoFar  best;
            for (int it = 0; it < config.iterations; ++it)
            {
                trace.evaluations += state.candidates.size();
                const Weights w = oracle_select(fn, to_domain(fn, state.candidates), config.oracle_resolution);
                state           = step(sc, state, w);
                best.offer(fn, fn.from_unit(state.candidates.front()));
                trace.residuals.push_back(residual(best.point, fn.optimum()));
            }
            return trace;
        }

        FittedModel fit_values(const std::vector<LatentVector>& points, const std::vector<double>& f,
                               const std::optional<KernelParams>& init)
        {
            // goodness = -f, standardized
            Eigen::VectorXd y(static_cast<Eigen::Index>(f.size()));
            for (std::size_t i = 0; i < f.size(); ++i)
            {
                y(static_cast<Eigen::Index>(i)) = -f[i];
            }
            const double mean = y.mean();
            const double sd   = std::sqrt((y.array() - mean).square().mean());
            y                 = (y.array() - mean) / (sd > 0.0 ? sd : 1.0);
            return fit_regression(points, y, init);
        }

        TrialTrace run_pointwise_trial(const StudyConfig& config, std::uint64_t seed)
        {
            const auto&     fn    = config.function;
            const int       d     = fn.dimension;
            const int       batch = config.method.candidates;
            const PriorSpec prior = PriorSpec::uniform(d, 0.0, 1.0);
            AcquisitionConfig acq = config.acquisition;
            acq.sigma1            = 0.0;
            acq.sigma2            = 0.0;

            Rng rng(seed);
            std::vector<LatentVector> points;
            std::vector<double>       values;
            std::optional<KernelParams> params;
            TrialTrace                trace;
            BestSoFar                 best;

            auto observe = [&](const LatentVector& u) {
                const LatentVector x = fn.from_unit(u);
                points.push_back(u);
                values.push_back(evaluate(fn, x));
                best.offer(fn, x);
                ++trace.evaluations;
            };

            for (int it = 0; it < config.iterations; ++it)
            {
                for (int k = 0; k < batch; ++k)
                {
                    if (it == 0)
                    {
                        observe(latent_prior_sample(prior, d, rng));
                        continue;
                    }
                    const FittedModel        model = fit_values(points, values, params);
                    const AcquisitionProblem problem{model, acq, prior};
                    params = model.params();
                    LatentVector u = maximize(problem, rng);
                    for (const auto& p : points)
                    {
                        if ((p - u).norm() < 1e-6)
                        {
                            u = latent_prior_sample(prior, d, rng);
                            break;
                        }
                    }
                    observe(u);
                }
                trace.residuals.push_back(residual(best.point, fn.optimum()));
            }
            return trace;
        }
    } // namespace

    MethodSpec MethodSpec::parse(std::string_view name)
    {
        if (name == "slider1")
        {
            return {Method::slider1_bo, 2};
        }
        if (name == "random")
        {
            return {Method::random_sampling, 4};
        }
        if (name == "pointwise")
        {
            return {Method::pointwise_bo, 4};
        }
        if (name.starts_with("sliders") && name.size() > 7)
        {
            int c = 0;
            for (char ch : name.substr(7))
            {
                if (ch < '0' || ch > '9')
                {
                    throw Error("unknown method: " + std::string(name));
                }
                c = c * 10 + (ch - '0');
                if (c > 64)
                {
                    throw Error("too many sliders: " + std::string(name));
                }
            }
            if (c < 2)
            {
                throw Error("sliders method needs at least 2 sliders: " + std::string(name));
            }
            return {Method::sliders_bo, c};
        }
        throw Error("unknown method: " + std::string(name));
    }

    std::string MethodSpec::name() const
    {
        switch (method)
        {
        case Method::sliders_bo: return "sliders" + std::to_string(candidates);
        case Method::slider1_bo: return "slider1";
        case Method::random_sampling: return "random";
        case Method::pointwise_bo: return "pointwise";
        }
        return "unknown";
    }

    int MethodSpec::slider_count() const { return method == Method::slider1_bo ? 1 : candidates; }

    void StudyConfig::validate() const
    {
        if (iterations < 1)
        {
            throw Error("study needs at least one iteration");
        }
        if (seeds.empty())
        {
            throw Error("study needs at least one seed");
        }
        if (oracle_resolution < 1)
        {
            throw Error("oracle resolution must be positive");
        }
        if (method.method == Method::slider1_bo && method.candidates != 2)
        {
            throw Error("slider1 uses exactly two candidates");
        }
        acquisition.validate();
    }

    double residual(const LatentVector& x, const LatentVector& x_hat)
    {
        require_same_dimension(x, x_hat, "residual");
        return (x - x_hat).squaredNorm();
    }

    Weights oracle_select(const TestFunction& fn, const std::vector<LatentVector>& candidates, int resolution)
    {
        if (candidates.size() < 2)
        {
            throw Error("oracle_select needs at least 2 candidates");
        }
        if (resolution < 1)
        {
            throw Error("oracle resolution must be positive");
        }
        const auto c = static_cast<Eigen::Index>(candidates.size());
        auto value = [&](const Weights& w) { return evaluate(fn, blended_latent(candidates, w)); };

        Weights          best   = Weights::Zero(c);
        double           best_f = std::numeric_limits<double>::infinity();
        std::vector<int> counts(static_cast<std::size_t>(c));
        Weights          w(c);
        auto             visit = [&](const std::vector<int>& k) {
            for (Eigen::Index i = 0; i < c; ++i)
            {
                w(i) = static_cast<double>(k[static_cast<std::size_t>(i)]) / resolution;
            }
            const double f = value(w);
            if (f < best_f)
            {
                best_f = f;
                best   = w;
            }
        };
        for_each_composition(counts, 0, resolution, visit);

        // Pairwise mass exchange: move t from vertex j to vertex i, t in [-w_i, w_j].
        for (int sweep = 0; sweep < 200; ++sweep)
        {
            const double start_f = best_f;
            for (Eigen::Index i = 0; i < c; ++i)
            {
                for (Eigen::Index j = i + 1; j < c; ++j)
                {
                    const double lo = -best(i);
                    const double hi = best(j);
                    if (hi - lo <= 0.0)
                    {
                        continue;
                    }
                    Weights trial = best;
                    auto    along = [&](double t) {
                        trial(i) = best(i) + t;
                        trial(j) = best(j) - t;
                        return value(trial);
                    };
                    const auto [t, f] = boost::math::tools::brent_find_minima(along, lo, hi, 40);
                    if (f < best_f)
                    {
                        best(i) = std::max(0.0, best(i) + t);
                        best(j) = std::max(0.0, best(j) - t);
                        best /= best.sum();
                        best_f = value(best);
                    }
                }
            }
            if (start_f - best_f <= 1e-14 * std::max(1.0, std::abs(start_f)))
            {
                break;
            }
        }
        return best;
    }

    TrialTrace run_trial_traced(const StudyConfig& config, std::uint64_t seed)
    {
        config.validate();
        if (config.method.method == Method::pointwise_bo)
        {
            return run_pointwise_trial(config, seed);
        }
        return run_subspace_trial(config, seed);
    }

    std::vector<double> run_trial(const StudyConfig& config, std::uint64_t seed)
    {
        return run_trial_traced(config, seed).residuals;
    }

    StudyResult run_study(const StudyConfig& config)
    {
        config.validate();
        const auto n = static_cast<Eigen::Index>(config.seeds.size());
        std::vector<std::vector<double>> rows(config.seeds.size());

        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        for (std::size_t first = 0; first < config.seeds.size(); first += workers)
        {
            const std::size_t last = std::min(config.seeds.size(), first + workers);
            if (workers == 1)
            {
                rows[first] = run_trial(config, config.seeds[first]);
                continue;
            }
            std::vector<std::future<std::vector<double>>> pending;
            for (std::size_t s = first; s < last; ++s)
            {
                pending.push_back(std::async(std::launch::async, [&config, s] { return run_trial(config, config.seeds[s]); }));
            }
            for (std::size_t s = first; s < last; ++s)
            {
                rows[s] = pending[s - first].get();
            }
        }

        StudyResult result;
        result.residuals.resize(n, config.iterations);
        for (Eigen::Index s = 0; s < n; ++s)
        {
            for (int it = 0; it < config.iterations; ++it)
            {
                result.residuals(s, it) = rows[static_cast<std::size_t>(s)][static_cast<std::size_t>(it)];
            }
        }
        result.mean   = result.residuals.colwise().mean().transpose();
        result.stddev = Eigen::VectorXd::Zero(config.iterations);
        if (n > 1)
        {
            for (int it = 0; it < config.iterations; ++it)
            {
                const double m = result.mean(it);
                result.stddev(it) =
                    std::sqrt((result.residuals.col(it).array() - m).square().sum() / static_cast<double>(n - 1));
            }
        }
        return result;
    }
} // namespace sss
