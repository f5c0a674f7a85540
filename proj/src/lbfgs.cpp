#include <sss/common.hpp>
#include <sss/lbfgs.hpp>

#include <cmath>
#include <deque>

namespace sss
{
    namespace
    {
        // Mask of variables that may move: not sitting on a bound with the gradient pushing outward.
        Eigen::ArrayXd free_mask(const Eigen::VectorXd& x, const Eigen::VectorXd& g, const std::optional<Box>& box)
        {
            Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(x.size());
            if (!box)
            {
                return mask;
            }
            for (Eigen::Index i = 0; i < x.size(); ++i)
            {
                const bool at_lower = x(i) <= box->lower(i) && g(i) > 0.0;
                const bool at_upper = x(i) >= box->upper(i) && g(i) < 0.0;
                if (at_lower || at_upper)
                {
                    mask(i) = 0.0;
                }
            }
            return mask;
        }

        struct Pair
        {
            Eigen::VectorXd s;
            Eigen::VectorXd y;
            double          rho;
        };

        Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<Pair>& history)
        {
            Eigen::VectorXd     q = g;
            std::vector<double> alpha(history.size());
            for (std::size_t k = history.size(); k-- > 0;)
            {
                alpha[k] = history[k].rho * history[k].s.dot(q);
                q -= alpha[k] * history[k].y;
            }
            if (!history.empty())
            {
                const auto& last = history.back();
                q *= last.s.dot(last.y) / last.y.squaredNorm();
            }
            for (std::size_t k = 0; k < history.size(); ++k)
            {
                const double beta = history[k].rho * history[k].y.dot(q);
                q += (alpha[k] - beta) * history[k].s;
            }
            return -q;
        }
    } // namespace

    LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options)
    {
        const auto& box = options.bounds;
        if (box)
        {
            x0 = box->project(x0);
        }

        LbfgsResult     result;
        Eigen::VectorXd grad(x0.size());
        result.x     = std::move(x0);
        result.value = objective(result.x, grad);
        if (!std::isfinite(result.value) || !grad.allFinite())
        {
            throw Error("lbfgs: objective is not finite at the start point");
        }

        std::deque<Pair> history;
        Eigen::VectorXd  trial_grad(result.x.size());

        for (int iter = 0; iter < options.max_iters; ++iter)
        {
            const Eigen::ArrayXd  mask   = free_mask(result.x, grad, box);
            const Eigen::VectorXd g_free = (grad.array() * mask).matrix();
            if (g_free.lpNorm<Eigen::Infinity>() < options.grad_tol)
            {
                result.converged = true;
                break;
            }

            Eigen::VectorXd direction = (two_loop(g_free, history).array() * mask).matrix();
            if (!(direction.dot(g_free) < 0.0))
            {
                history.clear();
                direction = -g_free;
            }

            double          step = 1.0;
            if (history.empty())
            {
                step = std::min(1.0, 1.0 / g_free.norm());
            }
            bool            accepted = false;
            Eigen::VectorXd trial;
            double          trial_value = 0.0;
            for (int k = 0; k < options.max_backtrack; ++k)
            {
                trial = result.x + step * direction;
                if (box)
                {
                    trial = box->project(trial);
                }
                trial_value           = objective(trial, trial_grad);
                const double decrease = grad.dot(trial - result.x);
                if (std::isfinite(trial_value) && trial_grad.allFinite() &&
                    trial_value <= result.value + 1e-4 * decrease)
                {
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            result.iterations = iter + 1;
            if (!accepted)
            {
                if (history.empty())
                {
                    break;
                }
                history.clear();
                continue;
            }

            Pair p{trial - result.x, trial_grad - grad, 0.0};
            const double sy = p.s.dot(p.y);
            if (sy > 1e-12 * p.s.norm() * p.y.norm())
            {
                p.rho = 1.0 / sy;
                history.push_back(std::move(p));
                if (static_cast<int>(history.size()) > options.memory)
                {
                    history.pop_front();
                }
            }

            const double previous = result.value;
            result.x              = std::move(trial);
            result.value          = trial_value;
            grad                  = trial_grad;
            if (std::abs(previous - result.value) <= options.value_tol * std::max(1.0, std::abs(previous)))
            {
                result.converged = true;
                break;
            }
        }
        return result;
    }
} // namespace sss
