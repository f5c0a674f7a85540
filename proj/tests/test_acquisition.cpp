#include "oracles.hpp"

#include <sss/acquisition.hpp>

#include <doctest.h>

using namespace sss;

namespace
{
    LatentVector vec(std::initializer_list<double> v)
    {
        LatentVector z(static_cast<Eigen::Index>(v.size()));
        std::copy(v.begin(), v.end(), z.begin());
        return z;
    }

    FittedModel toy_model(int d, std::uint64_t seed, int m = 5)
    {
        std::mt19937_64           rng(seed);
        std::vector<LatentVector> pts;
        Eigen::VectorXd           g(m);
        for (int i = 0; i < m; ++i)
        {
            pts.push_back(oracle::random_vector(rng, d, -1.0, 1.0));
            g(i) = oracle::random_vector(rng, 1, -0.5, 0.5)(0);
        }
        return FittedModel(pts, g, KernelParams{0.5, 0.5, 1e-6});
    }

    double plain_ei(const FittedModel& model, const LatentVector& z)
    {
        const auto p = posterior_predict(model, z);
        return expected_improvement(p.mean, p.variance, incumbent(model));
    }
} // namespace

TEST_CASE("expected_improvement examples")
{
    CHECK(expected_improvement(0.0, 0.0, 1.0) == 0.0);
    CHECK(expected_improvement(2.0, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(expected_improvement(0.7, 1.0, 0.7) == doctest::Approx(0.398942280401432678).epsilon(1e-14));
    // frozen from mpmath quadrature
    CHECK(expected_improvement(0.3, 0.25, 0.5) == doctest::Approx(0.115219418473726487).epsilon(1e-12));
    CHECK(std::abs(expected_improvement(0.3, 0.25, 0.5) - oracle::monte_carlo_ei(0.3, 0.25, 0.5, 1000000, 1)) < 1e-3);

    CHECK(expected_improvement(0.0, -1e-13, 1.0) == 0.0);
    CHECK_THROWS_AS(expected_improvement(0.0, -1e-6, 1.0), Error);
}

TEST_CASE("expected_improvement monotonicity and Monte-Carlo agreement")
{
    std::mt19937_64                        rng(21);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    for (int i = 0; i < 200; ++i)
    {
        const double mean = u(rng), var = pos(rng), inc = u(rng), dm = pos(rng), dv = pos(rng);
        const double base = expected_improvement(mean, var, inc);
        CHECK(base >= 0.0);
        CHECK(expected_improvement(mean + dm, var, inc) >= base);
        if (mean <= inc)
        {
            CHECK(expected_improvement(mean, var + dv, inc) >= base);
        }
    }
    for (int i = 0; i < 10; ++i)
    {
        const double mean = u(rng), var = 0.01 + pos(rng), inc = u(rng);
        const double analytic = expected_improvement(mean, var, inc);
        const double mc       = oracle::monte_carlo_ei(mean, var, inc, 1000000, 100 + i);
        if (analytic < 0.1)
        {
            CHECK(std::abs(analytic - mc) < 1e-3);
        }
        else
        {
            CHECK(std::abs(analytic - mc) / analytic < 0.01);
        }
    }
}

TEST_CASE("prior_penalty")
{
    const auto normal = PriorSpec::standard_normal();
    CHECK(prior_penalty(vec({0.0, 0.0, 0.0}), normal) == 0.0);
    CHECK(prior_penalty(vec({2.0, 0.0}), normal) == doctest::Approx(2.0));
    CHECK(prior_penalty(vec({1.0, 1.0, 1.0, 1.0}), normal) == doctest::Approx(2.0));

    const auto box = PriorSpec::uniform(2, -1.0, 1.0);
    CHECK(prior_penalty(vec({0.3, -0.9}), box) == 0.0);
    CHECK(std::isinf(prior_penalty(vec({1.5, 0.0}), box)));
}

TEST_CASE("c_ei reductions and decomposition")
{
    const auto model = toy_model(8, 3);
    const ProceduralGenerator generator(8, 16, 16);

    AcquisitionConfig none{0.0, 0.0, 8, 100, 1e-3};
    const AcquisitionProblem plain{model, none, PriorSpec::standard_normal()};
    std::mt19937_64          rng(5);
    for (int i = 0; i < 10; ++i)
    {
        const auto z = oracle::random_vector(rng, 8, -1, 1);
        CHECK(c_ei(z, plain) == doctest::Approx(plain_ei(model, z)).epsilon(1e-14));
    }

    AcquisitionConfig penalty_only{0.0, 1.0, 8, 100, 1e-3};
    const AcquisitionProblem pen{model, penalty_only, PriorSpec::standard_normal()};
    const LatentVector       origin = LatentVector::Zero(8);
    CHECK(c_ei(origin, pen) == doctest::Approx(plain_ei(model, origin)).epsilon(1e-14));

    // Guidance identical to G(z): the content term vanishes.
    const auto               z0 = oracle::random_vector(rng, 8, -1, 1);
    const auto               guidance = new_guidance(generator.render(z0));
    AcquisitionConfig        full{1.0, 0.5, 8, 100, 1e-3};
    const AcquisitionProblem content{model, full, PriorSpec::standard_normal(), &guidance, &generator};
    const auto               terms = c_ei_terms(z0, content);
    CHECK(terms.content == 0.0);
    CHECK(terms.total == doctest::Approx(plain_ei(model, z0) - 0.5 * prior_penalty(z0, PriorSpec::standard_normal())));

    for (int i = 0; i < 20; ++i)
    {
        const auto z = oracle::random_vector(rng, 8, -2, 2);
        const auto t = c_ei_terms(z, content);
        CHECK(std::abs(t.total + 1.0 * t.content + 0.5 * t.penalty - t.ei) < 1e-10);
        CHECK(t.content > 0.0);
    }

    // Without guidance the content weight is ignored.
    const AcquisitionProblem no_guidance{model, full, PriorSpec::standard_normal()};
    CHECK(c_ei_terms(z0, no_guidance).content == 0.0);
}

TEST_CASE("c_ei gradient agrees with finite differences")
{
    const auto                model = toy_model(8, 9);
    const ProceduralGenerator generator(8, 16, 16);
    std::mt19937_64           rng(6);
    const auto                guidance = new_guidance(generator.render(oracle::random_vector(rng, 8, -1, 1)));

    for (double sigma1 : {0.0, 0.05})
    {
        AcquisitionConfig        cfg{sigma1, 0.1, 8, 100, 1e-4};
        const AcquisitionProblem problem{model, cfg, PriorSpec::standard_normal(), &guidance, &generator};
        for (int i = 0; i < 5; ++i)
        {
            const auto      z = oracle::random_vector(rng, 8, -0.8, 0.8);
            Eigen::VectorXd grad;
            c_ei_with_gradient(z, problem, grad);
            const auto numeric =
                oracle::central_difference([&](const Eigen::VectorXd& y) { return c_ei(y, problem); }, z, 1e-5);
            CHECK((grad - numeric).norm() <= 1e-4 * std::max(1.0, numeric.norm()));
        }
    }
}

TEST_CASE("maximize")
{
    AcquisitionConfig cfg{0.0, 0.0, 8, 100, 1e-3};

    SUBCASE("single observation at the origin")
    {
        const FittedModel        model({LatentVector::Zero(3)}, Eigen::VectorXd::Zero(1), KernelParams{0.5, 0.5, 1e-6});
        const AcquisitionProblem problem{model, cfg, PriorSpec::standard_normal()};
        Rng                      rng(1);
        const auto               z = maximize(problem, rng);
        CHECK(c_ei(z, problem) >= c_ei(LatentVector::Zero(3), problem));
    }

    SUBCASE("result dominates every start point")
    {
        const auto               model = toy_model(3, 14);
        const auto               prior = PriorSpec::uniform(3, -1.0, 1.0);
        const AcquisitionProblem problem{model, cfg, prior};
        Rng                      rng(77);
        Rng                      replay(77);
        const auto               z = maximize(problem, rng);
        const double             best = c_ei(z, problem);
        for (int i = 0; i < cfg.restarts; ++i)
        {
            CHECK(best >= c_ei(latent_prior_sample(prior, 3, replay), problem));
        }
        for (const auto& p : model.points())
        {
            CHECK(best >= c_ei(p, problem));
        }
    }

    SUBCASE("1-d landscape against a dense grid")
    {
        Eigen::VectorXd g(2);
        g << 0.2, 0.5;
        const FittedModel        model({vec({-0.6}), vec({0.4})}, g, KernelParams{0.5, 0.3, 1e-6});
        const auto               prior = PriorSpec::uniform(1, -2.0, 2.0);
        const AcquisitionProblem problem{model, cfg, prior};
        double                   grid_best = -1.0;
        for (int i = 0; i < 10000; ++i)
        {
            grid_best = std::max(grid_best, c_ei(vec({-2.0 + 4.0 * i / 9999.0}), problem));
        }
        Rng rng(2);
        CHECK(std::abs(c_ei(maximize(problem, rng), problem) - grid_best) < 1e-2);
        CHECK(c_ei(maximize(problem, rng), problem) >= grid_best - 1e-6);
    }

    SUBCASE("a huge prior weight pulls the maximizer to the origin")
    {
        const auto               model = toy_model(2, 31, 4);
        AcquisitionConfig        heavy{0.0, 1e6, 8, 100, 1e-3};
        const AcquisitionProblem problem{model, heavy, PriorSpec::standard_normal()};
        Rng                      rng(3);
        const auto               z = maximize(problem, rng);
        CHECK(z.norm() < 0.5);

        // 2-d grid oracle for the same objective
        double       grid_best = -std::numeric_limits<double>::infinity();
        LatentVector grid_arg;
        for (int i = -300; i <= 300; ++i)
        {
            for (int j = -300; j <= 300; ++j)
            {
                const auto   p = vec({i * 0.002, j * 0.002});
                const double v = c_ei(p, problem);
                if (v > grid_best)
                {
                    grid_best = v;
                    grid_arg  = p;
                }
            }
        }
        CHECK(grid_arg.norm() < 0.5);
        CHECK(c_ei(z, problem) >= grid_best - 1e-6);
    }
}

TEST_CASE("select_candidates constant liar")
{
    AcquisitionConfig cfg{0.0, 0.0, 8, 100, 1e-3};
    const auto        model = toy_model(2, 40, 4);
    const auto        prior = PriorSpec::uniform(2, -1.5, 1.5);
    const AcquisitionProblem problem{model, cfg, prior};

    Rng a(9), b(9);
    const auto one = select_candidates(problem, 1, a);
    REQUIRE(one.points.size() == 1);
    CHECK(one.points[0] == maximize(problem, b));

    Rng c(9), d(9);
    const auto three = select_candidates(problem, 3, c);
    REQUIRE(three.points.size() == 3);
    CHECK(three.points[0] == maximize(problem, d));
    CHECK(three.liar_value == incumbent(model));
    for (std::size_t i = 0; i < 3; ++i)
    {
        for (std::size_t j = i + 1; j < 3; ++j)
        {
            CHECK((three.points[i] - three.points[j]).norm() >= 1e-6);
        }
    }

    Rng        e(9);
    const auto again = select_candidates(problem, 3, e);
    for (std::size_t i = 0; i < 3; ++i)
    {
        CHECK(again.points[i] == three.points[i]);
    }

    CHECK_THROWS_AS(select_candidates(problem, 0, e), Error);
}

TEST_CASE("select_candidates on a symmetric 1-d model")
{
    Eigen::VectorXd g(2);
    g << 0.3, 0.3;
    const FittedModel        model({vec({-0.5}), vec({0.5})}, g, KernelParams{0.5, 0.4, 1e-6});
    AcquisitionConfig        cfg{0.0, 0.0, 8, 100, 1e-3};
    const AcquisitionProblem problem{model, cfg, PriorSpec::uniform(1, -2.0, 2.0)};
    Rng                      rng(12);
    const auto               batch = select_candidates(problem, 3, rng);

    double grid_best = 0.0;
    for (int i = 0; i < 10000; ++i)
    {
        grid_best = std::max(grid_best, plain_ei(model, vec({-2.0 + 4.0 * i / 9999.0})));
    }
    CHECK(plain_ei(model, batch.points[0]) >= grid_best - 1e-2);
    CHECK(plain_ei(model, batch.points[1]) <= plain_ei(model, batch.points[0]) + 1e-12);
}
