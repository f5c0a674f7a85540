#include "oracles.hpp"

#include <sss/prior.hpp>
#include <sss/procedural.hpp>
#include <sss/test_functions.hpp>

#include <doctest.h>

using namespace sss;

TEST_CASE("benchmark functions at their optima")
{
    CHECK(evaluate(TestFunction::make(FunctionKind::sphere, 5), LatentVector::Zero(5)) == 0.0);

    LatentVector ones = LatentVector::Ones(2);
    CHECK(evaluate(TestFunction::make(FunctionKind::rosenbrock_standard, 2), ones) == 0.0);
    CHECK(evaluate(TestFunction::make(FunctionKind::rosenbrock_paper, 2), ones) == 0.0);

    // (-1, 1, 1): 100(1 - 1)^2 + (1 - 1)^2 + 100(1 - 1)^2 + (1 - 1)^2
    LatentVector x(3);
    x << -1.0, 1.0, 1.0;
    CHECK(evaluate(TestFunction::make(FunctionKind::rosenbrock_paper, 3), x) == 0.0);
    CHECK(evaluate(TestFunction::make(FunctionKind::rosenbrock_standard, 3), x) == doctest::Approx(4.0));

    CHECK_THROWS_AS(evaluate(TestFunction::make(FunctionKind::sphere, 3), LatentVector::Zero(2)), DimensionError);
}

TEST_CASE("benchmark domains, clipping and nonnegativity")
{
    const auto sphere = TestFunction::make(FunctionKind::sphere, 4);
    CHECK(sphere.lower == -5.12);
    CHECK(sphere.upper == 5.12);
    const auto rosen = TestFunction::make(FunctionKind::rosenbrock_paper, 4);
    CHECK(rosen.lower == -5.0);
    CHECK(rosen.upper == 10.0);

    bool clipped = false;
    evaluate(sphere, LatentVector::Constant(4, 7.0), &clipped);
    CHECK(clipped);
    CHECK(evaluate(sphere, LatentVector::Constant(4, 7.0)) == doctest::Approx(4 * 5.12 * 5.12));
    evaluate(sphere, LatentVector::Constant(4, 1.0), &clipped);
    CHECK_FALSE(clipped);

    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i)
    {
        const auto x = oracle::random_vector(rng, 4, -5.0, 10.0);
        CHECK(evaluate(rosen, x) >= 0.0);
        CHECK(evaluate(TestFunction::make(FunctionKind::rosenbrock_standard, 4), x) >= 0.0);
        const auto y = oracle::random_vector(rng, 4, -5.12, 5.12);
        CHECK(std::abs(evaluate(sphere, y) - y.squaredNorm()) < 1e-12);
    }

    const auto u = oracle::random_vector(rng, 4, 0, 1);
    CHECK((rosen.to_unit(rosen.from_unit(u)) - u).norm() < 1e-12);
    CHECK(parse_function_kind("rosenbrock") == FunctionKind::rosenbrock_paper);
    CHECK_THROWS_AS(parse_function_kind("ackley"), Error);
}

TEST_CASE("goodness_oracle negates the benchmark")
{
    const auto fn = TestFunction::make(FunctionKind::sphere, 3);
    const auto g  = goodness_oracle(fn);
    CHECK(g(LatentVector::Zero(3)) == 0.0);

    std::mt19937_64           rng(2);
    std::vector<LatentVector> set;
    for (int i = 0; i < 20; ++i)
    {
        const auto x = oracle::random_vector(rng, 3, -5, 5);
        const auto y = oracle::random_vector(rng, 3, -5, 5);
        CHECK(g(x) - g(y) == doctest::Approx(evaluate(fn, y) - evaluate(fn, x)));
        CHECK(g(x) <= 0.0);
        set.push_back(x);
    }
    std::size_t arg_g = 0, arg_f = 0;
    for (std::size_t i = 1; i < set.size(); ++i)
    {
        arg_g = g(set[i]) > g(set[arg_g]) ? i : arg_g;
        arg_f = evaluate(fn, set[i]) < evaluate(fn, set[arg_f]) ? i : arg_f;
    }
    CHECK(arg_g == arg_f);
}

TEST_CASE("latent_prior_sample")
{
    const auto box = PriorSpec::uniform(6, -5.12, 5.12);
    Rng        rng(3);
    for (int i = 0; i < 500; ++i)
    {
        CHECK(box.contains(latent_prior_sample(box, 6, rng)));
    }

    Rng a(42), b(42);
    CHECK(latent_prior_sample(PriorSpec::standard_normal(), 5, a) ==
          latent_prior_sample(PriorSpec::standard_normal(), 5, b));

    // law of large numbers
    Rng             n(7);
    Eigen::VectorXd sum    = Eigen::VectorXd::Zero(4);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(4);
    const int       count  = 100000;
    for (int i = 0; i < count; ++i)
    {
        const auto z = latent_prior_sample(PriorSpec::standard_normal(), 4, n);
        sum += z;
        sum_sq += z.cwiseProduct(z);
    }
    const Eigen::VectorXd mean = sum / count;
    const Eigen::VectorXd var  = sum_sq / count - mean.cwiseProduct(mean);
    CHECK(mean.cwiseAbs().maxCoeff() < 0.02);
    CHECK((var.array() - 1.0).abs().maxCoeff() < 0.05);

    PriorSpec broken = box;
    broken.upper(2)  = broken.lower(2);
    CHECK_THROWS_AS(broken.validate(6), Error);
}

TEST_CASE("render_procedural contract")
{
    std::mt19937_64 rng(4);
    const auto      z = oracle::random_vector(rng, 16, -2, 2);
    CHECK(render_procedural(z, 32, 24) == render_procedural(z, 32, 24));

    for (int i = 0; i < 100; ++i)
    {
        const auto img = render_procedural(oracle::random_vector(rng, 12, -6, 6), 16, 16);
        CHECK_NOTHROW(img.validate());
    }

    // continuity probe
    for (int i = 0; i < 16; ++i)
    {
        LatentVector moved = z;
        moved(i) += 1e-6;
        CHECK(std::abs(render_procedural(moved, 32, 32).mean() - render_procedural(z, 32, 32).mean()) < 1e-3);
    }

    CHECK_THROWS_AS(render_procedural(LatentVector::Zero(7), 16, 16), Error);
    CHECK_THROWS_AS(render_procedural(LatentVector::Zero(8), 7, 16), Error);
    CHECK_THROWS_AS(ProceduralGenerator(16, 16, 16).render(LatentVector::Zero(8)), DimensionError);

    // every coordinate, including a zero-padded trailing chunk, moves the picture
    const LatentVector generic = oracle::random_vector(rng, 12, -1, 1);
    const auto         base    = render_procedural(generic, 16, 16);
    for (int i = 0; i < 12; ++i)
    {
        LatentVector moved = generic;
        moved(i) += 1.0;
        CHECK_FALSE(render_procedural(moved, 16, 16) == base);
    }
}

TEST_CASE("render_procedural has no jumps along random segments")
{
    std::mt19937_64 rng(5);
    for (int line = 0; line < 100; ++line)
    {
        const auto   from      = oracle::random_vector(rng, 16, -3, 3);
        auto         direction = oracle::random_vector(rng, 16, -1, 1);
        direction.normalize();
        double       previous = render_procedural(from, 16, 16).mean();
        double       worst    = 0.0;
        for (int k = 1; k <= 20; ++k)
        {
            const double current = render_procedural(from + (1e-3 * k) * direction, 16, 16).mean();
            worst                = std::max(worst, std::abs(current - previous));
            previous             = current;
        }
        CHECK(worst < 1e-2);
    }
}
