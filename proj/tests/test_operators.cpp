#include "scalereg/errors.hpp"
#include "scalereg/operators.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace scalereg;
using scalereg::testing::loglog_slope;
using scalereg::testing::random_vector;

namespace {

std::vector<ForwardProblem> all_kinds(const Grid& grid) {
    return {ForwardProblem::linear_integration(grid),
            ForwardProblem::exponential_growth(grid, 1.0, 1.0),
            ForwardProblem::autoconvolution(grid)};
}

} // namespace

TEST_SUITE_BEGIN("operators");

TEST_CASE("evaluation on reference inputs") {
    const int n = 128;
    Grid grid = Grid::uniform_midpoint(n, 1.0);

    SUBCASE("integration of 1 is t") {
        auto problem = ForwardProblem::linear_integration(grid);
        const Vec out = problem.apply(Vec::Ones(n));
        CHECK((out - grid.nodes).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("exponential growth of 0 is c0") {
        auto problem = ForwardProblem::exponential_growth(grid, 2.0, 1.0);
        const Vec out = problem.apply(Vec::Zero(n));
        CHECK((out.array() - 2.0).abs().maxCoeff() < 1e-14);
    }
    SUBCASE("autoconvolution of 1 is s") {
        auto problem = ForwardProblem::autoconvolution(grid);
        const Vec out = problem.apply(Vec::Ones(n));
        CHECK((out - grid.nodes).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("exponential growth overflow guard") {
        auto problem = ForwardProblem::exponential_growth(grid, 1.0, 1.0);
        CHECK_THROWS_AS(problem.apply(Vec::Constant(n, 2000.0)), MagnitudeError);
    }
    SUBCASE("exponential growth outputs stay positive") {
        auto problem = ForwardProblem::exponential_growth(grid, 0.5, 2.0);
        Rng rng(3);
        for (int k = 0; k < 10; ++k) {
            const Vec out = problem.apply(random_vector(rng, n, -3.0, 3.0));
            CHECK(out.minCoeff() > 0.0);
        }
    }
}

TEST_CASE("derivative actions") {
    const int n = 96;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    Rng rng(5);

    SUBCASE("linear operator derivative is the operator itself") {
        auto problem = ForwardProblem::linear_integration(grid);
        const Vec f1 = random_vector(rng, n), f2 = random_vector(rng, n);
        const Vec h = random_vector(rng, n);
        CHECK((problem.derivative_apply(f1, h) - problem.apply(h)).norm() == 0.0);
        CHECK((problem.derivative_apply(f2, h) - problem.apply(h)).norm() == 0.0);
    }
    SUBCASE("autoconvolution derivative at ones doubles the integral") {
        auto problem = ForwardProblem::autoconvolution(grid);
        const Vec out = problem.derivative_apply(Vec::Ones(n), Vec::Ones(n));
        CHECK((out - 2.0 * grid.nodes).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("derivative action is linear") {
        for (const auto& problem : all_kinds(grid)) {
            const Vec f = random_vector(rng, n);
            const Vec h1 = random_vector(rng, n), h2 = random_vector(rng, n);
            const double al = rng.uniform(-2.0, 2.0), be = rng.uniform(-2.0, 2.0);
            const Vec lhs = problem.derivative_apply(f, al * h1 + be * h2);
            const Vec rhs = al * problem.derivative_apply(f, h1) +
                            be * problem.derivative_apply(f, h2);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    SUBCASE("derivative matrix agrees with the action") {
        for (const auto& problem : all_kinds(grid)) {
            const Vec f = random_vector(rng, n);
            const Vec h = random_vector(rng, n);
            const Vec via_matrix = problem.derivative_matrix(f) * h;
            const Vec direct = problem.derivative_apply(f, h);
            CHECK((via_matrix - direct).cwiseAbs().maxCoeff() <
                  1e-12 * (1.0 + direct.cwiseAbs().maxCoeff()));
        }
    }
    SUBCASE("Taylor remainder is second order (finite-difference oracle)") {
        const std::vector<double> eps{1e-2, 1e-3, 1e-4, 1e-5};
        for (const auto& problem : all_kinds(grid)) {
            const Vec f = random_vector(rng, n, -0.5, 0.5);
            const Vec h = random_vector(rng, n, -0.5, 0.5);
            const Vec base = problem.apply(f);
            const Vec dfh = problem.derivative_apply(f, h);
            std::vector<double> rem;
            for (double e : eps)
                rem.push_back(grid.norm(problem.apply(f + e * h) - base - e * dfh));
            if (rem[0] < 1e-12) {
                // linear kind: remainder vanishes identically
                for (double r : rem)
                    CHECK(r < 1e-12);
            } else {
                const double slope = loglog_slope(eps, rem);
                CHECK(slope > 1.9);
                CHECK(slope < 2.1);
            }
        }
    }
}

TEST_CASE("adjoint identity (inner-product oracle)") {
    const int n = 64;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    Rng rng(7);

    for (const auto& problem : all_kinds(grid)) {
        const Vec f = random_vector(rng, n, -0.5, 0.5);
        for (int k = 0; k < 100; ++k) {
            const Vec h = random_vector(rng, n);
            const Vec r = random_vector(rng, n);
            const double lhs = grid.inner(problem.derivative_apply(f, h), r);
            const double rhs = grid.inner(h, problem.derivative_adjoint_apply(f, r));
            CHECK(std::abs(lhs - rhs) <= 1e-9 * (1.0 + std::abs(lhs)));
        }
        CHECK(problem.derivative_adjoint_apply(f, Vec::Zero(n)).norm() == 0.0);
    }

    // the linear adjoint does not depend on the linearization point
    auto linear = ForwardProblem::linear_integration(grid);
    const Vec r = random_vector(rng, n);
    const Vec a1 = linear.derivative_adjoint_apply(random_vector(rng, n), r);
    const Vec a2 = linear.derivative_adjoint_apply(random_vector(rng, n), r);
    CHECK((a1 - a2).norm() == 0.0);
    CHECK((a1 - weighted_adjoint(linear.integration(), grid) * r).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("autoconvolution second-order identity is exact") {
    const int n = 80;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    auto problem = ForwardProblem::autoconvolution(grid);
    Rng rng(9);
    for (int k = 0; k < 20; ++k) {
        const Vec f = random_vector(rng, n);
        const Vec h = random_vector(rng, n);
        const Vec lhs = problem.apply(f + h) - problem.apply(f) - problem.derivative_apply(f, h);
        const Vec rhs = problem.apply(h);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
        // discrete analogue of ||F(h)|| <= ||h||^2
        CHECK(grid.norm(rhs) <= grid.norm(h) * grid.norm(h) * (1.0 + 1e-12));
    }
}

TEST_CASE("domain projection") {
    const int n = 32;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    Rng rng(13);
    const Vec f = random_vector(rng, n);

    auto problem = ForwardProblem::autoconvolution(grid);
    CHECK((problem.project_domain(f) - f).norm() == 0.0); // D(F) = X by default

    problem.set_domain(DomainKind::Nonnegative);
    const Vec p = problem.project_domain(f);
    CHECK(p.minCoeff() >= 0.0);
    for (int i = 0; i < n; ++i)
        CHECK(p[i] == (f[i] > 0.0 ? f[i] : 0.0));
    CHECK((problem.project_domain(p) - p).norm() == 0.0); // idempotent
}

TEST_CASE("mesh refinement smoke") {
    // coarse output vs the averaged fine output on matching abscissae
    auto run = [](int n) {
        Grid grid = Grid::uniform_midpoint(n, 1.0);
        auto problem = ForwardProblem::autoconvolution(grid);
        Vec f(n);
        for (int i = 0; i < n; ++i)
            f[i] = std::sin(2.0 * M_PI * grid.nodes[i]) + 1.0;
        return std::make_pair(grid, problem.apply(f));
    };
    auto [g64, out64] = run(64);
    auto [g128, out128] = run(128);
    auto [g256, out256] = run(256);

    auto diff_to_finer = [](const Vec& coarse, const Vec& fine) {
        double worst = 0.0;
        for (int i = 0; i < coarse.size(); ++i)
            worst = std::max(worst,
                             std::abs(coarse[i] - 0.5 * (fine[2 * i] + fine[2 * i + 1])));
        return worst;
    };
    const double e1 = diff_to_finer(out64, out128);
    const double e2 = diff_to_finer(out128, out256);
    CHECK(e1 < 5e-3);
    CHECK(e2 < e1);
}

TEST_SUITE_END();
