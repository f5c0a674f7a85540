#pragma once

#include <sss/guidance.hpp>
#include <sss/preference_model.hpp>
#include <sss/prior.hpp>
#include <sss/procedural.hpp>

#include <vector>

namespace sss
{
    struct AcquisitionConfig
    {
        double sigma1    = 1.0;  // content term weight
        double sigma2    = 0.01; // prior penalty weight
        int    restarts  = 8;
        int    max_iters = 100;
        double fd_step   = 1e-3; // central-difference step for the generator-dependent term

        void validate() const;
    };

    /// E[max(N(mean, variance) - incumbent, 0)]. Variances down to -1e-12 are clamped to 0.
    double expected_improvement(double mean, double variance, double incumbent);

    /// Negative log prior density shifted so its minimum is 0. Infinite outside a uniform box.
    double prior_penalty(const LatentVector& z, const PriorSpec& prior);

    /// Everything the content-aware acquisition needs besides the point itself. `guidance` and
    /// `generator` may be null, in which case the content term is dropped.
    struct AcquisitionProblem
    {
        const FittedModel&   model;
        AcquisitionConfig    config;
        PriorSpec            prior;
        const GuidanceState* guidance  = nullptr;
        const Generator*     generator = nullptr;

        bool uses_content() const { return config.sigma1 > 0.0 && guidance != nullptr && generator != nullptr; }
    };

    /// EI(z) - sigma1 C(G(z)) - sigma2 R(z), with the incumbent taken from the model.
    double c_ei(const LatentVector& z, const AcquisitionProblem& problem);

    /// Same as above, with the terms broken out.
    struct AcquisitionTerms
    {
        double ei      = 0.0;
        double content = 0.0;
        double penalty = 0.0;
        double total   = 0.0;
    };
    AcquisitionTerms c_ei_terms(const LatentVector& z, const AcquisitionProblem& problem);

    /// Gradient of c_ei: analytic for EI and the normal penalty, central differences for the
    /// content term.
    double c_ei_with_gradient(const LatentVector& z, const AcquisitionProblem& problem, Eigen::VectorXd& grad);

    /// Multi-start bounded quasi-Newton ascent of c_ei: one start at the best observed point and
    /// `restarts` starts drawn from the prior. Returns the best local optimum found.
    LatentVector maximize(const AcquisitionProblem& problem, Rng& rng);

    struct CandidateBatch
    {
        std::vector<LatentVector> points;
        double                    liar_value = 0.0; // incumbent before augmentation
    };

    /// Constant-liar batch: after each pick the model is augmented with all picks so far at the
    /// original incumbent value and the acquisition is maximized again.
    CandidateBatch select_candidates(const AcquisitionProblem& problem, int count, Rng& rng);
} // namespace sss
