#include <sss/kernel.hpp>

#include <cmath>

namespace sss
{
    void KernelParams::validate() const
    {
        auto ok = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!ok(amplitude) || !ok(lengthscale) || !ok(noise))
        {
            throw Error("kernel parameters must be positive and finite");
        }
    }

    double kernel_value(const LatentVector& a, const LatentVector& b, const KernelParams& params)
    {
        require_same_dimension(a, b, "kernel_value");
        const double r2 = (a - b).squaredNorm();
        return params.amplitude * params.amplitude *
               std::exp(-r2 / (2.0 * params.lengthscale * params.lengthscale));
    }

    Eigen::MatrixXd squared_distances(const std::vector<LatentVector>& points)
    {
        const auto      m = static_cast<Eigen::Index>(points.size());
        Eigen::MatrixXd d2(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            d2(i, i) = 0.0;
            for (Eigen::Index j = i + 1; j < m; ++j)
            {
                require_same_dimension(points[i], points[j], "squared_distances");
                d2(i, j) = d2(j, i) = (points[i] - points[j]).squaredNorm();
            }
        }
        return d2;
    }

    Eigen::MatrixXd kernel_matrix(const std::vector<LatentVector>& points, const KernelParams& params)
    {
        if (points.empty())
        {
            throw Error("kernel_matrix: at least one point required");
        }
        const double    s2  = params.amplitude * params.amplitude;
        const double    inv = 1.0 / (2.0 * params.lengthscale * params.lengthscale);
        Eigen::MatrixXd k   = (-inv * squared_distances(points)).array().exp() * s2;
        k.diagonal().array() += params.noise;
        return k;
    }

    Eigen::VectorXd kernel_vector(const LatentVector& z, const std::vector<LatentVector>& points,
                                  const KernelParams& params)
    {
        Eigen::VectorXd k(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            k(static_cast<Eigen::Index>(i)) = kernel_value(z, points[i], params);
        }
        return k;
    }

    double KernelFactor::log_determinant() const
    {
        return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }

    KernelFactor factorize(Eigen::MatrixXd matrix, double scale)
    {
        KernelFactor f;
        f.matrix = std::move(matrix);
        f.llt.compute(f.matrix);
        double jitter = 1e-10 * scale;
        while (f.llt.info() != Eigen::Success)
        {
            if (jitter > 1e-2 * scale)
            {
                throw Error("kernel degenerate");
            }
            f.matrix.diagonal().array() += jitter - f.extra_jitter;
            f.extra_jitter = jitter;
            f.llt.compute(f.matrix);
            jitter *= 10.0;
        }
        return f;
    }
} // namespace sss
