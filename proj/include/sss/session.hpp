#pragma once

#include <sss/acquisition.hpp>
#include <sss/guidance.hpp>
#include <sss/preference_model.hpp>
#include <sss/prior.hpp>
#include <sss/procedural.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

namespace sss
{
    /// How the c-1 new candidates of each round are produced.
    enum class CandidateStrategy
    {
        bayesian, // constant-liar c_ei maximizers
        random    // fresh prior draws (ablation baseline)
    };

    struct SessionConfig
    {
        int                              dimension       = 8;
        int                              candidate_count = 4;
        PriorSpec                        prior;
        AcquisitionConfig                acquisition;
        MapFitOptions                    fit;
        std::shared_ptr<const Generator> generator;
        std::uint64_t                    seed     = 0;
        CandidateStrategy                strategy = CandidateStrategy::bayesian;

        void validate() const;
    };

    struct SessionState
    {
        int                          iteration = 0;
        std::vector<LatentVector>    candidates;
        std::vector<PreferenceRecord> dataset;
        std::optional<FittedModel>   model;
        std::optional<GuidanceState> guidance; // guidance used for the latest selection
        Rng                          rng;
    };

    /// Normalizes slider values onto the simplex. Throws on negative values or all zeros.
    Weights blend_weights(const Eigen::VectorXd& sliders);

    /// sum_j weights_j * candidates_j
    LatentVector blended_latent(const std::vector<LatentVector>& candidates, const Weights& weights);

    /// Iteration 0: c candidates drawn from the prior with the configured seed.
    SessionState create(const SessionConfig& config);

    /// One round of the loop: blend, record, refit, rebuild guidance from the blend and the
    /// edits, and pick the next candidates (the blend first).
    SessionState step(const SessionConfig& config, const SessionState& state, const Eigen::VectorXd& sliders,
                      const std::vector<EditOp>& edits = {});

    /// Number of distinct points observed so far.
    std::size_t observed_point_count(const SessionState& state);
} // namespace sss
