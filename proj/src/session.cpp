#include <sss/session.hpp>

#include <cmath>

namespace sss
{
    void SessionConfig::validate() const
    {
        if (dimension < 1)
        {
            throw Error("session dimension must be at least 1");
        }
        if (candidate_count < 2)
        {
            throw Error("session needs at least 2 candidates");
        }
        prior.validate(dimension);
        acquisition.validate();
        if (generator && generator->dimension() != dimension)
        {
            throw DimensionError("generator dimension differs from session dimension");
        }
    }

    Weights blend_weights(const Eigen::VectorXd& sliders)
    {
        if (sliders.size() == 0 || !sliders.allFinite() || (sliders.array() < 0.0).any())
        {
            throw Error("slider values must be finite and nonnegative");
        }
        const double total = sliders.sum();
        if (!(total > 0.0))
        {
            throw Error("degenerate sliders");
        }
        return sliders / total;
    }

    LatentVector blended_latent(const std::vector<LatentVector>& candidates, const Weights& weights)
    {
        if (candidates.empty() || static_cast<Eigen::Index>(candidates.size()) != weights.size())
        {
            throw DimensionError("blend: weight count differs from candidate count");
        }
        if ((weights.array() < 0.0).any() || std::abs(weights.sum() - 1.0) > 1e-9)
        {
            throw Error("blend: weights must lie on the simplex");
        }
        LatentVector z = LatentVector::Zero(candidates.front().size());
        for (std::size_t j = 0; j < candidates.size(); ++j)
        {
            require_same_dimension(candidates[j], z, "blend");
            z += weights(static_cast<Eigen::Index>(j)) * candidates[j];
        }
        return z;
    }

    SessionState create(const SessionConfig& config)
    {
        config.validate();
        SessionState state;
        state.rng.seed(config.seed);
        for (int i = 0; i < config.candidate_count; ++i)
        {
            state.candidates.push_back(latent_prior_sample(config.prior, config.dimension, state.rng));
        }
        return state;
    }

    SessionState step(const SessionConfig& config, const SessionState& state, const Eigen::VectorXd& sliders,
                      const std::vector<EditOp>& edits)
    {
        if (sliders.size() != static_cast<Eigen::Index>(state.candidates.size()))
        {
            throw DimensionError("expected one slider value per candidate");
        }
        if (!edits.empty() && !config.generator)
        {
            throw Error("edits require a generator");
        }

        SessionState next   = state;
        const LatentVector chosen = blended_latent(state.candidates, blend_weights(sliders));
        next.dataset.push_back(PreferenceRecord{chosen, state.candidates});

        next.guidance.reset();
        if (config.generator)
        {
            GuidanceState g = new_guidance(config.generator->render(chosen));
            for (const auto& op : edits)
            {
                g = apply_edit(g, op);
            }
            next.guidance = std::move(g);
        }

        const int fresh = config.candidate_count - 1;
        next.candidates = {chosen};
        if (config.strategy == CandidateStrategy::random)
        {
            for (int i = 0; i < fresh; ++i)
            {
                next.candidates.push_back(latent_prior_sample(config.prior, config.dimension, next.rng));
            }
        }
        else
        {
            next.model.emplace(map_fit(next.dataset, state.model ? &*state.model : nullptr, config.fit));
            const AcquisitionProblem problem{*next.model, config.acquisition, config.prior,
                                             next.guidance ? &*next.guidance : nullptr, config.generator.get()};
            auto batch = select_candidates(problem, fresh, next.rng);
            next.candidates.insert(next.candidates.end(), batch.points.begin(), batch.points.end());
        }
        ++next.iteration;
        return next;
    }

    std::size_t observed_point_count(const SessionState& state) { return index_records(state.dataset).points.size(); }
} // namespace sss
