#pragma once

#include <sss/common.hpp>
#include <sss/kernel.hpp>

#include <optional>
#include <span>
#include <vector>

namespace sss
{
    /// Log-normal hyperprior placed on every optimized kernel parameter: LN(ln 0.5, 0.1),
    /// with 0.1 read as the variance of the underlying normal.
    struct Hyperprior
    {
        double log_mean = -0.69314718055994530942; // ln 0.5
        double variance = 0.1;

        double log_density(double value) const;
        /// d/d(log value) of log_density(value).
        double log_density_gradient_wrt_log(double value) const;
    };

    /// Deduplicated view of a record list: distinct points plus, for each record, the option
    /// rows (chosen and competitors, aliased within 1e-9) and which of them was chosen.
    struct PreferenceData
    {
        struct Choice
        {
            std::vector<int> options;
            int              chosen = 0; // position inside `options`
        };

        std::vector<LatentVector> points;
        std::vector<Choice>       choices;
    };

    PreferenceData index_records(const std::vector<PreferenceRecord>& records);

    /// Fitted goodness values at all observed points plus kernel parameters. Immutable.
    class FittedModel
    {
    public:
        FittedModel(std::vector<LatentVector> points, Eigen::VectorXd goodness, KernelParams params);

        const std::vector<LatentVector>& points() const { return points_; }
        const Eigen::VectorXd&           goodness() const { return goodness_; }
        const KernelParams&              params() const { return params_; }
        const KernelFactor&              factor() const { return factor_; }
        /// K^{-1} g
        const Eigen::VectorXd&           weights() const { return alpha_; }
        Eigen::Index                     size() const { return goodness_.size(); }
        Eigen::Index                     dimension() const { return points_.front().size(); }

        /// Copy of this model with extra points carrying the given goodness value; the kernel
        /// parameters are kept.
        FittedModel augmented(const std::vector<LatentVector>& extra, double value) const;

    private:
        std::vector<LatentVector> points_;
        Eigen::VectorXd           goodness_;
        KernelParams              params_;
        KernelFactor              factor_;
        Eigen::VectorXd           alpha_;
    };

    /// log softmax(goodness / s) evaluated at `chosen`.
    double btl_choice_log_prob(std::span<const double> goodness, std::size_t chosen, double s = 1.0);

    struct LogPosterior
    {
        double          value = 0.0;
        Eigen::VectorXd grad_goodness;
        double          grad_log_amplitude   = 0.0;
        double          grad_log_lengthscale = 0.0;
    };

    /// Sum of BTL choice log-probabilities, log N(g; 0, K) and the hyperprior on amplitude and
    /// lengthscale. Gradients are taken w.r.t. g and the log of each optimized parameter.
    LogPosterior dataset_log_posterior(const Eigen::VectorXd& goodness, const KernelParams& params,
                                       const PreferenceData& data, bool with_gradient = false,
                                       const Hyperprior& prior = {}, double s = 1.0);

    struct MapFitOptions
    {
        int    max_iters   = 200;
        double grad_tol    = 1e-6;
        double sensitivity = 1.0; // BTL s
        double noise       = 1e-6;
    };

    /// Joint MAP estimate of goodness values and kernel parameters. `init` warm-starts the
    /// goodness of points it already knows and the kernel parameters; new points start at 0.
    FittedModel map_fit(const std::vector<PreferenceRecord>& records, const FittedModel* init = nullptr,
                        const MapFitOptions& options = {});

    struct Prediction
    {
        double mean     = 0.0;
        double variance = 0.0;
    };

    Prediction posterior_predict(const FittedModel& model, const LatentVector& z);

    /// Prediction plus d(mean)/dz and d(variance)/dz.
    Prediction posterior_predict(const FittedModel& model, const LatentVector& z, Eigen::VectorXd& grad_mean,
                                 Eigen::VectorXd& grad_variance);

    /// Largest fitted goodness (g'^+).
    double incumbent(const FittedModel& model);

    /// Value-observation GP used by the point-wise baseline: kernel parameters are the MAP of
    /// the marginal likelihood under the same hyperprior, goodness is `values` verbatim.
    FittedModel fit_regression(std::vector<LatentVector> points, Eigen::VectorXd values,
                               const std::optional<KernelParams>& init = std::nullopt, double noise = 1e-6);
} // namespace sss
