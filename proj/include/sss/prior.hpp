#pragma once

#include <sss/common.hpp>
#include <sss/lbfgs.hpp>

#include <random>

namespace sss
{
    using Rng = std::mt19937_64;

    /// Distribution the latent vectors are drawn from.
    struct PriorSpec
    {
        enum class Kind
        {
            standard_normal,
            uniform_box
        };

        Kind            kind = Kind::standard_normal;
        Eigen::VectorXd lower; // uniform_box only
        Eigen::VectorXd upper;

        static PriorSpec standard_normal() { return {}; }
        static PriorSpec uniform(int dimension, double lo, double hi);

        void validate(int dimension) const;
        bool contains(const LatentVector& z) const;

        /// Box the acquisition maximizer works in: the prior box, or |z|_inf <= 6 for the normal.
        Box search_box(int dimension) const;
    };

    LatentVector latent_prior_sample(const PriorSpec& prior, int dimension, Rng& rng);
} // namespace sss
