#include <sss/common.hpp>
#include <sss/lbfgs.hpp>

#include <doctest.h>

using namespace sss;

TEST_CASE("lbfgs minimizes the 2-d Rosenbrock function")
{
    const Objective rosen = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const double a = x(1) - x(0) * x(0);
        g.resize(2);
        g(0) = -400.0 * x(0) * a - 2.0 * (1.0 - x(0));
        g(1) = 200.0 * a;
        return 100.0 * a * a + (1.0 - x(0)) * (1.0 - x(0));
    };
    LbfgsOptions opts;
    opts.max_iters = 500;
    opts.grad_tol  = 1e-9;
    const auto r   = lbfgs_minimize(rosen, Eigen::Vector2d(-1.2, 1.0), opts);
    CHECK(r.converged);
    CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("lbfgs respects box bounds")
{
    // Unconstrained minimum at (3, -3); the box pins it to (1, -1).
    const Objective quad = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = 2.0 * (x - Eigen::Vector2d(3.0, -3.0));
        return (x - Eigen::Vector2d(3.0, -3.0)).squaredNorm();
    };
    LbfgsOptions opts;
    opts.bounds = Box{Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1)};
    const auto r = lbfgs_minimize(quad, Eigen::Vector2d(0.0, 0.0), opts);
    CHECK(r.x(0) == doctest::Approx(1.0));
    CHECK(r.x(1) == doctest::Approx(-1.0));
    CHECK(r.value == doctest::Approx(8.0));
}

TEST_CASE("lbfgs rejects a non-finite start and never increases the objective")
{
    const Objective bad = [](const Eigen::VectorXd&, Eigen::VectorXd& g) {
        g = Eigen::VectorXd::Zero(1);
        return std::numeric_limits<double>::quiet_NaN();
    };
    CHECK_THROWS_AS(lbfgs_minimize(bad, Eigen::VectorXd::Zero(1), {}), Error);

    const Objective bowl = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        g = 4.0 * x.array().cube().matrix();
        return x.array().pow(4).sum();
    };
    Eigen::VectorXd x0(3);
    x0 << 2.0, -1.0, 0.5;
    Eigen::VectorXd g0;
    const double    start = bowl(x0, g0);
    CHECK(lbfgs_minimize(bowl, x0, {}).value <= start);
}
