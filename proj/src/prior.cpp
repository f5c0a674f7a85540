#include <sss/prior.hpp>

namespace sss
{
    PriorSpec PriorSpec::uniform(int dimension, double lo, double hi)
    {
        PriorSpec p;
        p.kind  = Kind::uniform_box;
        p.lower = Eigen::VectorXd::Constant(dimension, lo);
        p.upper = Eigen::VectorXd::Constant(dimension, hi);
        p.validate(dimension);
        return p;
    }

    void PriorSpec::validate(int dimension) const
    {
        if (dimension < 1)
        {
            throw Error("prior dimension must be at least 1");
        }
        if (kind == Kind::uniform_box)
        {
            if (lower.size() != dimension || upper.size() != dimension)
            {
                throw DimensionError("uniform prior bounds do not match the dimension");
            }
            if (!(lower.array() < upper.array()).all())
            {
                throw Error("uniform prior needs lo < hi in every dimension");
            }
        }
    }

    bool PriorSpec::contains(const LatentVector& z) const
    {
        if (kind == Kind::standard_normal)
        {
            return z.allFinite();
        }
        return z.size() == lower.size() && (z.array() >= lower.array()).all() && (z.array() <= upper.array()).all();
    }

    Box PriorSpec::search_box(int dimension) const
    {
        if (kind == Kind::uniform_box)
        {
            return {lower, upper};
        }
        return {Eigen::VectorXd::Constant(dimension, -6.0), Eigen::VectorXd::Constant(dimension, 6.0)};
    }

    LatentVector latent_prior_sample(const PriorSpec& prior, int dimension, Rng& rng)
    {
        prior.validate(dimension);
        LatentVector z(dimension);
        if (prior.kind == PriorSpec::Kind::standard_normal)
        {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (auto& v : z)
            {
                v = normal(rng);
            }
        }
        else
        {
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            for (Eigen::Index i = 0; i < dimension; ++i)
            {
                z(i) = prior.lower(i) + (prior.upper(i) - prior.lower(i)) * unit(rng);
            }
        }
        return z;
    }
} // namespace sss
