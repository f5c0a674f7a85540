#include <sss/lbfgs.hpp>
#include <sss/preference_model.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sss
{
    namespace
    {
        int find_or_insert(std::vector<LatentVector>& points, const LatentVector& z)
        {
            for (std::size_t i = 0; i < points.size(); ++i)
            {
                if (same_point(points[i], z))
                {
                    return static_cast<int>(i);
                }
            }
            if (!points.empty())
            {
                require_same_dimension(points.front(), z, "index_records");
            }
            if (!is_finite(z))
            {
                throw Error("index_records: non-finite latent vector");
            }
            points.push_back(z);
            return static_cast<int>(points.size()) - 1;
        }

        void add_option(std::vector<int>& options, int row)
        {
            if (std::find(options.begin(), options.end(), row) == options.end())
            {
                options.push_back(row);
            }
        }

        Eigen::MatrixXd signal_covariance(const Eigen::MatrixXd& sq_dist, const KernelParams& params)
        {
            const double inv = 1.0 / (2.0 * params.lengthscale * params.lengthscale);
            return (-inv * sq_dist).array().exp() * (params.amplitude * params.amplitude);
        }

        // Gradient of log N(y; 0, K) w.r.t. log amplitude and log lengthscale:
        // 0.5 * tr((alpha alpha^T - K^{-1}) dK).
        std::pair<double, double> gaussian_hyper_gradient(const KernelFactor& factor, const Eigen::VectorXd& alpha,
                                                          const Eigen::MatrixXd& signal,
                                                          const Eigen::MatrixXd& sq_dist, double lengthscale)
        {
            const auto      m = alpha.size();
            Eigen::MatrixXd w = factor.llt.solve(Eigen::MatrixXd::Identity(m, m));
            w                 = alpha * alpha.transpose() - w;
            const double d_amp = 0.5 * (w.cwiseProduct(2.0 * signal)).sum();
            const double d_len =
                0.5 * (w.cwiseProduct(signal.cwiseProduct(sq_dist))).sum() / (lengthscale * lengthscale);
            return {d_amp, d_len};
        }
    } // namespace

    double Hyperprior::log_density(double value) const
    {
        const double u = std::log(value);
        return -u - (u - log_mean) * (u - log_mean) / (2.0 * variance) -
               0.5 * std::log(2.0 * std::numbers::pi * variance);
    }

    double Hyperprior::log_density_gradient_wrt_log(double value) const
    {
        return -1.0 - (std::log(value) - log_mean) / variance;
    }

    PreferenceData index_records(const std::vector<PreferenceRecord>& records)
    {
        PreferenceData data;
        for (const auto& record : records)
        {
            if (record.competitors.empty())
            {
                throw Error("preference record without competitors");
            }
            PreferenceData::Choice choice;
            for (const auto& z : record.competitors)
            {
                add_option(choice.options, find_or_insert(data.points, z));
            }
            const int chosen_row = find_or_insert(data.points, record.chosen);
            add_option(choice.options, chosen_row);
            choice.chosen = static_cast<int>(std::find(choice.options.begin(), choice.options.end(), chosen_row) -
                                             choice.options.begin());
            data.choices.push_back(std::move(choice));
        }
        return data;
    }

    FittedModel::FittedModel(std::vector<LatentVector> points, Eigen::VectorXd goodness, KernelParams params)
        : points_(std::move(points)), goodness_(std::move(goodness)), params_(params)
    {
        if (points_.empty())
        {
            throw Error("fitted model needs at least one point");
        }
        if (static_cast<Eigen::Index>(points_.size()) != goodness_.size())
        {
            throw DimensionError("fitted model: goodness length differs from point count");
        }
        params_.validate();
        factor_ = factorize(kernel_matrix(points_, params_), params_.amplitude * params_.amplitude);
        alpha_  = factor_.llt.solve(goodness_);
    }

    FittedModel FittedModel::augmented(const std::vector<LatentVector>& extra, double value) const
    {
        auto            points = points_;
        Eigen::VectorXd g(goodness_.size() + static_cast<Eigen::Index>(extra.size()));
        g.head(goodness_.size()) = goodness_;
        g.tail(static_cast<Eigen::Index>(extra.size())).setConstant(value);
        points.insert(points.end(), extra.begin(), extra.end());
        return FittedModel(std::move(points), std::move(g), params_);
    }

    double btl_choice_log_prob(std::span<const double> goodness, std::size_t chosen, double s)
    {
        if (!(s > 0.0))
        {
            throw Error("btl: sensitivity must be positive");
        }
        if (chosen >= goodness.size())
        {
            throw Error("btl: chosen index out of range");
        }
        double top = goodness[0];
        for (double g : goodness)
        {
            if (!std::isfinite(g))
            {
                throw Error("btl: non-finite goodness");
            }
            top = std::max(top, g);
        }
        double sum = 0.0;
        for (double g : goodness)
        {
            sum += std::exp((g - top) / s);
        }
        return (goodness[chosen] - top) / s - std::log(sum);
    }

    LogPosterior dataset_log_posterior(const Eigen::VectorXd& goodness, const KernelParams& params,
                                       const PreferenceData& data, bool with_gradient, const Hyperprior& prior,
                                       double s)
    {
        const auto m = static_cast<Eigen::Index>(data.points.size());
        if (goodness.size() != m)
        {
            throw DimensionError("dataset_log_posterior: goodness length differs from point count");
        }
        params.validate();

        const Eigen::MatrixXd sq_dist = squared_distances(data.points);
        const Eigen::MatrixXd signal  = signal_covariance(sq_dist, params);
        Eigen::MatrixXd       k       = signal;
        k.diagonal().array() += params.noise;
        const KernelFactor    factor = factorize(std::move(k), params.amplitude * params.amplitude);
        const Eigen::VectorXd alpha  = factor.llt.solve(goodness);

        LogPosterior out;
        out.value = -0.5 * goodness.dot(alpha) - 0.5 * factor.log_determinant() -
                    0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi);
        if (with_gradient)
        {
            out.grad_goodness = -alpha;
        }

        std::vector<double> option_values;
        for (const auto& choice : data.choices)
        {
            option_values.clear();
            for (int row : choice.options)
            {
                option_values.push_back(goodness(row));
            }
            out.value += btl_choice_log_prob(option_values, static_cast<std::size_t>(choice.chosen), s);
            if (with_gradient)
            {
                const double top = *std::max_element(option_values.begin(), option_values.end());
                double       sum = 0.0;
                for (double& v : option_values)
                {
                    v = std::exp((v - top) / s);
                    sum += v;
                }
                for (std::size_t j = 0; j < choice.options.size(); ++j)
                {
                    const double indicator = static_cast<int>(j) == choice.chosen ? 1.0 : 0.0;
                    out.grad_goodness(choice.options[j]) += (indicator - option_values[j] / sum) / s;
                }
            }
        }

        out.value += prior.log_density(params.amplitude) + prior.log_density(params.lengthscale);
        if (with_gradient)
        {
            const auto [d_amp, d_len] = gaussian_hyper_gradient(factor, alpha, signal, sq_dist, params.lengthscale);
            out.grad_log_amplitude    = d_amp + prior.log_density_gradient_wrt_log(params.amplitude);
            out.grad_log_lengthscale  = d_len + prior.log_density_gradient_wrt_log(params.lengthscale);
        }
        return out;
    }

    FittedModel map_fit(const std::vector<PreferenceRecord>& records, const FittedModel* init,
                        const MapFitOptions& options)
    {
        if (records.empty())
        {
            throw Error("map_fit: at least one record required");
        }
        const PreferenceData data = index_records(records);
        const auto           m    = static_cast<Eigen::Index>(data.points.size());

        Eigen::VectorXd x0 = Eigen::VectorXd::Zero(m + 2);
        KernelParams    start;
        if (init != nullptr)
        {
            start = init->params();
            for (Eigen::Index i = 0; i < m; ++i)
            {
                for (Eigen::Index j = 0; j < init->size(); ++j)
                {
                    if (same_point(data.points[static_cast<std::size_t>(i)],
                                   init->points()[static_cast<std::size_t>(j)]))
                    {
                        x0(i) = init->goodness()(j);
                        break;
                    }
                }
            }
        }
        start.noise = options.noise;
        x0(m)       = std::log(start.amplitude);
        x0(m + 1)   = std::log(start.lengthscale);

        auto unpack = [&](const Eigen::VectorXd& x) {
            KernelParams p;
            p.amplitude   = std::exp(x(m));
            p.lengthscale = std::exp(x(m + 1));
            p.noise       = options.noise;
            return p;
        };

        const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
            grad.resize(x.size());
            try
            {
                const auto lp = dataset_log_posterior(x.head(m), unpack(x), data, true, {}, options.sensitivity);
                grad.head(m)  = -lp.grad_goodness;
                grad(m)       = -lp.grad_log_amplitude;
                grad(m + 1)   = -lp.grad_log_lengthscale;
                return -lp.value;
            }
            catch (const Error&)
            {
                grad.setZero();
                return std::numeric_limits<double>::infinity();
            }
        };

        LbfgsOptions lbfgs;
        lbfgs.max_iters = options.max_iters;
        lbfgs.grad_tol  = options.grad_tol;
        LbfgsResult result;
        try
        {
            result = lbfgs_minimize(objective, x0, lbfgs);
        }
        catch (const Error& e)
        {
            std::ostringstream msg;
            msg << "map_fit: non-finite objective at start (points=" << m << ", records=" << records.size()
                << ", amplitude=" << start.amplitude << ", lengthscale=" << start.lengthscale << "): " << e.what();
            throw Error(msg.str());
        }
        return FittedModel(data.points, result.x.head(m), unpack(result.x));
    }

    Prediction posterior_predict(const FittedModel& model, const LatentVector& z)
    {
        const auto&     params = model.params();
        require_same_dimension(z, model.points().front(), "posterior_predict");
        const Eigen::VectorXd k = kernel_vector(z, model.points(), params);
        Prediction            p;
        p.mean     = k.dot(model.weights());
        p.variance = std::max(0.0, params.amplitude * params.amplitude - k.dot(model.factor().llt.solve(k)));
        return p;
    }

    Prediction posterior_predict(const FittedModel& model, const LatentVector& z, Eigen::VectorXd& grad_mean,
                                 Eigen::VectorXd& grad_variance)
    {
        const auto& params = model.params();
        const auto& pts    = model.points();
        require_same_dimension(z, pts.front(), "posterior_predict");
        const Eigen::VectorXd k   = kernel_vector(z, pts, params);
        const Eigen::VectorXd v   = model.factor().llt.solve(k);
        const double          il2 = 1.0 / (params.lengthscale * params.lengthscale);

        Prediction p;
        p.mean           = k.dot(model.weights());
        const double var = params.amplitude * params.amplitude - k.dot(v);
        p.variance       = std::max(0.0, var);

        // dk_i/dz = -k_i (z - x_i) / l^2
        grad_mean.setZero(z.size());
        grad_variance.setZero(z.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            const auto      ii = static_cast<Eigen::Index>(i);
            const auto      dk = (-k(ii) * il2) * (z - pts[i]);
            grad_mean += model.weights()(ii) * dk;
            grad_variance -= 2.0 * v(ii) * dk;
        }
        if (var <= 0.0)
        {
            grad_variance.setZero();
        }
        return p;
    }

    double incumbent(const FittedModel& model) { return model.goodness().maxCoeff(); }

    FittedModel fit_regression(std::vector<LatentVector> points, Eigen::VectorXd values,
                               const std::optional<KernelParams>& init, double noise)
    {
        if (points.empty() || static_cast<Eigen::Index>(points.size()) != values.size())
        {
            throw DimensionError("fit_regression: points and values must be non-empty and equal in length");
        }
        const Hyperprior      prior;
        const Eigen::MatrixXd sq_dist = squared_distances(points);
        const auto            m       = values.size();

        KernelParams start = init.value_or(KernelParams{});
        start.noise        = noise;

        const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
            grad.resize(2);
            KernelParams p{std::exp(x(0)), std::exp(x(1)), noise};
            try
            {
                const Eigen::MatrixXd signal = signal_covariance(sq_dist, p);
                Eigen::MatrixXd       k      = signal;
                k.diagonal().array() += noise;
                const KernelFactor    factor = factorize(std::move(k), p.amplitude * p.amplitude);
                const Eigen::VectorXd alpha  = factor.llt.solve(values);
                const double value = -0.5 * values.dot(alpha) - 0.5 * factor.log_determinant() -
                                     0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi) +
                                     prior.log_density(p.amplitude) + prior.log_density(p.lengthscale);
                const auto [d_amp, d_len] = gaussian_hyper_gradient(factor, alpha, signal, sq_dist, p.lengthscale);
                grad(0) = -(d_amp + prior.log_density_gradient_wrt_log(p.amplitude));
                grad(1) = -(d_len + prior.log_density_gradient_wrt_log(p.lengthscale));
                return -value;
            }
            catch (const Error&)
            {
                grad.setZero();
                return std::numeric_limits<double>::infinity();
            }
        };

        Eigen::VectorXd x0(2);
        x0 << std::log(start.amplitude), std::log(start.lengthscale);
        LbfgsOptions options;
        options.max_iters = 100;
        const auto   result = lbfgs_minimize(objective, x0, options);
        return FittedModel(std::move(points), std::move(values),
                           KernelParams{std::exp(result.x(0)), std::exp(result.x(1)), noise});
    }
} // namespace sss
