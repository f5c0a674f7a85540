#pragma once

#include <sss/common.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <vector>

namespace sss
{
    /// Isotropic RBF kernel parameters. All strictly positive.
    struct KernelParams
    {
        double amplitude   = 0.5;  // sigma_f
        double lengthscale = 0.5;  // ell
        double noise       = 1e-6; // added to the diagonal

        void validate() const;
    };

    /// k(a, b) = amplitude^2 * exp(-|a - b|^2 / (2 lengthscale^2))
    double kernel_value(const LatentVector& a, const LatentVector& b, const KernelParams& params);

    /// Covariance of the latent function at `points`, with `params.noise` on the diagonal.
    Eigen::MatrixXd kernel_matrix(const std::vector<LatentVector>& points, const KernelParams& params);

    /// Squared pairwise distances; cached by callers that differentiate w.r.t. the lengthscale.
    Eigen::MatrixXd squared_distances(const std::vector<LatentVector>& points);

    /// Kernel vector k(z, x_i) over all points.
    Eigen::VectorXd kernel_vector(const LatentVector& z, const std::vector<LatentVector>& points,
                                  const KernelParams& params);

    /// Cholesky factor of a kernel matrix. If the plain factorization fails, diagonal jitter is
    /// escalated by decades; `extra_jitter` records what was added beyond `params.noise`.
    struct KernelFactor
    {
        Eigen::MatrixXd          matrix;
        Eigen::LLT<Eigen::MatrixXd> llt;
        double                   extra_jitter = 0.0;

        double log_determinant() const;
    };

    /// Throws Error("kernel degenerate") when even the largest jitter fails.
    KernelFactor factorize(Eigen::MatrixXd matrix, double scale);
} // namespace sss
