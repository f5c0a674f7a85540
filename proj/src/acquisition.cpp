#include <sss/acquisition.hpp>

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <thread>

namespace sss
{
    namespace
    {
        constexpr double kSeparation = 1e-6;

        double normal_pdf(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }
        double normal_cdf(double u) { return 0.5 * std::erfc(-u / std::numbers::sqrt2); }

        double clamp_variance(double variance)
        {
            if (variance < -1e-12 || std::isnan(variance))
            {
                throw Error("expected_improvement: negative variance");
            }
            return std::max(variance, 0.0);
        }

        // EI and its partials w.r.t. mean and standard deviation.
        double ei_parts(double mean, double sigma, double incumbent, double& d_mean, double& d_sigma)
        {
            const double delta = mean - incumbent;
            if (sigma < 1e-12)
            {
                d_mean  = delta > 0.0 ? 1.0 : 0.0;
                d_sigma = 0.0;
                return std::max(delta, 0.0);
            }
            const double u   = delta / sigma;
            const double cdf = normal_cdf(u);
            const double pdf = normal_pdf(u);
            d_mean           = cdf;
            d_sigma          = pdf;
            return std::max(0.0, delta * cdf + sigma * pdf);
        }

        double content_value(const LatentVector& z, const AcquisitionProblem& p)
        {
            return content_term(*p.guidance, p.generator->render(z));
        }

        bool collides(const LatentVector& z, const std::vector<LatentVector>& others)
        {
            for (const auto& o : others)
            {
                if ((z - o).norm() < kSeparation)
                {
                    return true;
                }
            }
            return false;
        }

        LatentVector best_observed(const FittedModel& model)
        {
            Eigen::Index best = 0;
            model.goodness().maxCoeff(&best);
            return model.points()[static_cast<std::size_t>(best)];
        }

        struct LocalResult
        {
            LatentVector x;
            double       value = -std::numeric_limits<double>::infinity();
        };

        LocalResult ascend(const AcquisitionProblem& problem, const LatentVector& start, const Box& box)
        {
            const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
                const double v = c_ei_with_gradient(x, problem, grad);
                grad           = -grad;
                return -v;
            };
            LbfgsOptions options;
            options.max_iters = problem.config.max_iters;
            options.grad_tol  = 1e-8;
            options.value_tol = 1e-9;
            options.bounds    = box;
            try
            {
                const auto r = lbfgs_minimize(objective, start, options);
                return {r.x, -r.value};
            }
            catch (const Error&)
            {
                return {start, -std::numeric_limits<double>::infinity()};
            }
        }
    } // namespace

    void AcquisitionConfig::validate() const
    {
        if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0))
        {
            throw Error("acquisition weights must be nonnegative");
        }
        if (restarts < 1 || max_iters < 1)
        {
            throw Error("acquisition restarts and iterations must be positive");
        }
        if (!(fd_step > 0.0 && fd_step <= 1e-1))
        {
            throw Error("fd_step must lie in (0, 0.1]");
        }
    }

    double expected_improvement(double mean, double variance, double incumbent)
    {
        double d_mean  = 0.0;
        double d_sigma = 0.0;
        return ei_parts(mean, std::sqrt(clamp_variance(variance)), incumbent, d_mean, d_sigma);
    }

    double prior_penalty(const LatentVector& z, const PriorSpec& prior)
    {
        if (prior.kind == PriorSpec::Kind::standard_normal)
        {
            return 0.5 * z.squaredNorm();
        }
        return prior.contains(z) ? 0.0 : std::numeric_limits<double>::infinity();
    }

    AcquisitionTerms c_ei_terms(const LatentVector& z, const AcquisitionProblem& problem)
    {
        AcquisitionTerms t;
        const auto       pred = posterior_predict(problem.model, z);
        t.ei                  = expected_improvement(pred.mean, pred.variance, incumbent(problem.model));
        if (problem.uses_content())
        {
            t.content = content_value(z, problem);
        }
        if (problem.config.sigma2 > 0.0)
        {
            t.penalty = prior_penalty(z, problem.prior);
        }
        t.total = t.ei - problem.config.sigma1 * t.content - problem.config.sigma2 * t.penalty;
        return t;
    }

    double c_ei(const LatentVector& z, const AcquisitionProblem& problem) { return c_ei_terms(z, problem).total; }

    double c_ei_with_gradient(const LatentVector& z, const AcquisitionProblem& problem, Eigen::VectorXd& grad)
    {
        Eigen::VectorXd d_mean;
        Eigen::VectorXd d_var;
        const auto      pred  = posterior_predict(problem.model, z, d_mean, d_var);
        const double    sigma = std::sqrt(pred.variance);
        double          e_mu  = 0.0;
        double          e_sd  = 0.0;
        double value = ei_parts(pred.mean, sigma, incumbent(problem.model), e_mu, e_sd);

        grad = e_mu * d_mean;
        if (sigma >= 1e-12)
        {
            grad += (e_sd / (2.0 * sigma)) * d_var;
        }

        const auto& cfg = problem.config;
        if (cfg.sigma2 > 0.0)
        {
            value -= cfg.sigma2 * prior_penalty(z, problem.prior);
            if (problem.prior.kind == PriorSpec::Kind::standard_normal)
            {
                grad -= cfg.sigma2 * z;
            }
        }
        if (problem.uses_content())
        {
            value -= cfg.sigma1 * content_value(z, problem);
            LatentVector probe = z;
            for (Eigen::Index i = 0; i < z.size(); ++i)
            {
                probe(i)          = z(i) + cfg.fd_step;
                const double up   = content_value(probe, problem);
                probe(i)          = z(i) - cfg.fd_step;
                const double down = content_value(probe, problem);
                probe(i)          = z(i);
                grad(i) -= cfg.sigma1 * (up - down) / (2.0 * cfg.fd_step);
            }
        }
        return value;
    }

    LatentVector maximize(const AcquisitionProblem& problem, Rng& rng)
    {
        problem.config.validate();
        const auto d   = static_cast<int>(problem.model.dimension());
        const Box  box = problem.prior.search_box(d);

        std::vector<LatentVector> starts;
        starts.push_back(box.project(best_observed(problem.model)));
        for (int i = 0; i < problem.config.restarts; ++i)
        {
            starts.push_back(box.project(latent_prior_sample(problem.prior, d, rng)));
        }

        std::vector<LocalResult> results(starts.size());
        const unsigned           workers = std::max(1u, std::thread::hardware_concurrency());
        if (workers > 1 && starts.size() > 1)
        {
            std::vector<std::future<LocalResult>> pending;
            for (const auto& s : starts)
            {
                pending.push_back(std::async(std::launch::async, [&problem, &box, s] { return ascend(problem, s, box); }));
            }
            for (std::size_t i = 0; i < pending.size(); ++i)
            {
                results[i] = pending[i].get();
            }
        }
        else
        {
            for (std::size_t i = 0; i < starts.size(); ++i)
            {
                results[i] = ascend(problem, starts[i], box);
            }
        }

        const LocalResult* best = nullptr;
        for (const auto& r : results)
        {
            if (std::isfinite(r.value) && (best == nullptr || r.value > best->value))
            {
                best = &r;
            }
        }
        if (best == nullptr)
        {
            throw Error("maximize: no restart produced a finite acquisition value");
        }
        return best->x;
    }

    CandidateBatch select_candidates(const AcquisitionProblem& problem, int count, Rng& rng)
    {
        if (count < 1)
        {
            throw Error("select_candidates: count must be positive");
        }
        CandidateBatch batch;
        batch.liar_value = incumbent(problem.model);

        std::optional<FittedModel> augmented;
        for (int k = 0; k < count; ++k)
        {
            AcquisitionProblem current{augmented ? *augmented : problem.model, problem.config, problem.prior,
                                       problem.guidance, problem.generator};
            std::vector<LatentVector> taken = problem.model.points();
            taken.insert(taken.end(), batch.points.begin(), batch.points.end());

            LatentVector z = maximize(current, rng);
            for (int attempt = 0; attempt < 4 && collides(z, taken); ++attempt)
            {
                z = maximize(current, rng);
            }
            if (collides(z, taken))
            {
                z = problem.prior.search_box(static_cast<int>(z.size()))
                        .project(latent_prior_sample(problem.prior, static_cast<int>(z.size()), rng));
            }
            batch.points.push_back(z);
            if (k + 1 < count)
            {
                augmented.emplace(problem.model.augmented(batch.points, batch.liar_value));
            }
        }
        return batch;
    }
} // namespace sss
