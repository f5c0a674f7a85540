#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>

namespace sss
{
    /// Objective signature: returns f(x) and writes df/dx into `grad`.
    using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

    struct Box
    {
        Eigen::VectorXd lower;
        Eigen::VectorXd upper;

        Eigen::VectorXd project(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }
    };

    struct LbfgsOptions
    {
        int                max_iters     = 100;
        double             grad_tol      = 1e-6;
        int                memory        = 8;
        int                max_backtrack = 30;
        double             value_tol     = 1e-15; // stop when a step improves f by less than this, relative
        std::optional<Box> bounds;
    };

    struct LbfgsResult
    {
        Eigen::VectorXd x;
        double          value      = 0.0;
        int             iterations = 0;
        bool            converged  = false;
    };

    /// Limited-memory BFGS minimization with an Armijo backtracking line search. With `bounds`
    /// set, iterates are projected onto the box and variables pinned at an active bound are
    /// frozen for the step. Throws sss::Error if the objective is not finite at the start point.
    LbfgsResult lbfgs_minimize(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options);
} // namespace sss
