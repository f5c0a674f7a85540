#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace sss
{
    /// A point in the d-dimensional search (latent) space.
    using LatentVector = Eigen::VectorXd;

    /// Simplex weights produced from slider values.
    using Weights = Eigen::VectorXd;

    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Raised when two inputs disagree in dimension or shape.
    class DimensionError : public Error
    {
    public:
        using Error::Error;
    };

    inline void require_same_dimension(const LatentVector& a, const LatentVector& b, const char* what)
    {
        if (a.size() != b.size())
        {
            throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.size()) + " vs " +
                                 std::to_string(b.size()) + ")");
        }
    }

    inline bool is_finite(const LatentVector& z) { return z.allFinite(); }

    /// Coordinate-wise closeness; used to alias repeated observations.
    inline bool same_point(const LatentVector& a, const LatentVector& b, double tol = 1e-9)
    {
        return a.size() == b.size() && ((a - b).cwiseAbs().array() <= tol).all();
    }

    /// One slider interaction: the chosen blend and the candidates it was blended from.
    struct PreferenceRecord
    {
        LatentVector              chosen;
        std::vector<LatentVector> competitors;
    };
} // namespace sss
