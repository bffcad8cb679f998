#include "scalereg/errors.hpp"
#include "scalereg/scale.hpp"
#include "test_helpers.hpp"

#include <doctest.h>

#include <Eigen/Dense>

using namespace scalereg;
using scalereg::testing::random_vector;

namespace {

// Independent oracle: singular values of J in the weighted geometry via a
// dense SVD of W^{1/2} J W^{-1/2}.
Vec weighted_singular_values(const Mat& j, const Grid& grid) {
    const Vec sw = grid.weights.cwiseSqrt();
    Mat b = sw.asDiagonal() * j * sw.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Mat> svd(b);
    return svd.singularValues(); // descending
}

} // namespace

TEST_SUITE_BEGIN("scale");

TEST_CASE("grid invariants") {
    Grid g = Grid::uniform_midpoint(128, 2.5);
    g.validate();
    CHECK(g.weights.sum() == doctest::Approx(2.5).epsilon(1e-13));
    for (int i = 1; i < g.n; ++i)
        CHECK(g.nodes[i] > g.nodes[i - 1]);

    Grid bad = g;
    bad.weights[3] = -bad.weights[3];
    CHECK_THROWS_AS(bad.validate(), InvalidParameterError);
    CHECK_THROWS_AS(Grid::uniform_midpoint(0, 1.0), InvalidParameterError);
}

TEST_CASE("identity generator gives the trivial scale") {
    const int n = 16;
    Grid grid = Grid::uniform_midpoint(n, 1.0); // weights all 1/n
    SpectralScale scale = SpectralScale::from_operator(Mat::Identity(n, n), grid);

    for (int i = 0; i < n; ++i)
        CHECK(scale.eigenvalues()[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(scale.m_bound() == doctest::Approx(1.0).epsilon(1e-12));

    Rng rng(11);
    const Vec f = random_vector(rng, n);
    const Vec powered = scale.apply_power(2.7, f);
    CHECK((powered - f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("integration-generated scale matches the SVD oracle") {
    const int n = 64;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    const Mat j = integration_matrix(grid);
    SpectralScale scale = SpectralScale::from_operator(j, grid);

    const Vec sv = weighted_singular_values(j, grid);
    REQUIRE(sv.size() == n);
    for (int i = 0; i < n; ++i) {
        const double lambda_oracle = 1.0 / sv[i]; // ascending when sv descending
        CHECK(scale.eigenvalues()[i] ==
              doctest::Approx(lambda_oracle).epsilon(1e-9));
        CHECK(scale.eigenvalues()[i] > 0.0);
        if (i > 0)
            CHECK(scale.eigenvalues()[i] >= scale.eigenvalues()[i - 1]);
    }

    // columns weighted-orthonormal
    const Mat gram = scale.eigenvectors().transpose() * grid.weights.asDiagonal() *
                     scale.eigenvectors();
    CHECK((gram - Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("degenerate generator is rejected") {
    const int n = 16;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    Mat j = integration_matrix(grid);
    j.col(5).setZero();
    CHECK_THROWS_AS(SpectralScale::from_operator(j, grid), DegenerateGeneratorError);
}

TEST_CASE("apply_power spectral rules") {
    const int n = 48;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    SpectralScale scale = SpectralScale::from_operator(integration_matrix(grid), grid);
    Rng rng(21);

    SUBCASE("nu = 0 is the identity") {
        const Vec f = random_vector(rng, n);
        CHECK((scale.apply_power(0.0, f) - f).norm() == 0.0);
    }
    SUBCASE("eigenvectors are scaled by lambda^nu") {
        for (int i : {0, 7, n - 1}) {
            const Vec v = scale.eigenvectors().col(i);
            const Vec got = scale.apply_power(1.5, v);
            const Vec want = std::pow(scale.eigenvalues()[i], 1.5) * v;
            CHECK((got - want).cwiseAbs().maxCoeff() <
                  1e-9 * want.cwiseAbs().maxCoeff());
        }
    }
    SUBCASE("semigroup property") {
        const Vec f = random_vector(rng, n);
        const Vec twice = scale.apply_power(1.0, scale.apply_power(1.0, f));
        const Vec once = scale.apply_power(2.0, f);
        CHECK((twice - once).norm() < 1e-9 * once.norm());
    }
    SUBCASE("power-law consistency on random exponents") {
        for (int k = 0; k < 20; ++k) {
            const double nu1 = rng.uniform(-1.5, 1.5);
            const double nu2 = rng.uniform(-1.5, 1.5);
            const Vec f = random_vector(rng, n);
            const Vec composed = scale.apply_power(nu1, scale.apply_power(nu2, f));
            const Vec direct = scale.apply_power(nu1 + nu2, f);
            CHECK((composed - direct).norm() < 1e-9 * (1.0 + direct.norm()));
        }
    }
    SUBCASE("inverse round trip") {
        const Vec f = random_vector(rng, n);
        const Vec back = scale.apply_power(1.3, scale.apply_power(-1.3, f));
        CHECK((back - f).norm() < 1e-9 * f.norm());
    }
}

TEST_CASE("norm_nu") {
    const int n = 48;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    const Mat j = integration_matrix(grid);
    SpectralScale scale = SpectralScale::from_operator(j, grid);
    Rng rng(31);

    SUBCASE("eigenvector norms are powers of the eigenvalue") {
        for (int i : {0, 5, n - 1})
            CHECK(scale.norm(0.8, scale.eigenvectors().col(i)) ==
                  doctest::Approx(std::pow(scale.eigenvalues()[i], 0.8)).epsilon(1e-10));
    }
    SUBCASE("zero vector") { CHECK(scale.norm(1.7, Vec::Zero(n)) == 0.0); }
    SUBCASE("norm 0 is the weighted L2 norm") {
        const Vec f = random_vector(rng, n);
        CHECK(scale.norm(0.0, f) == doctest::Approx(grid.norm(f)).epsilon(1e-12));
    }
    SUBCASE("norm at -1 equals ||J f||") {
        const Vec f = random_vector(rng, n);
        CHECK(scale.norm(-1.0, f) == doctest::Approx(grid.norm(j * f)).epsilon(1e-9));
    }
    SUBCASE("lower bound of the generator") {
        for (int k = 0; k < 10; ++k) {
            const Vec f = random_vector(rng, n);
            CHECK(scale.norm(1.0, f) >= scale.m_bound() * grid.norm(f) * (1.0 - 1e-12));
        }
    }
    SUBCASE("monotone in nu when all eigenvalues >= 1") {
        REQUIRE(scale.m_bound() >= 1.0); // integration operator on [0,1]
        const Vec f = random_vector(rng, n);
        double prev = scale.norm(-1.0, f);
        for (double nu : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
            const double cur = scale.norm(nu, f);
            CHECK(cur >= prev * (1.0 - 1e-12));
            prev = cur;
        }
    }
}

TEST_CASE("interpolation inequality") {
    const int n = 48;
    Grid grid = Grid::uniform_midpoint(n, 1.0);
    SpectralScale scale = SpectralScale::from_operator(integration_matrix(grid), grid);
    Rng rng(41);

    SUBCASE("t = s collapses to the s-norm") {
        const Vec f = random_vector(rng, n);
        const auto rep = scale.check_interpolation(1.0, 0.7, 0.7, f);
        CHECK(rep.lhs == doctest::Approx(scale.norm(0.7, f)).epsilon(1e-12));
        CHECK(rep.rhs == doctest::Approx(rep.lhs).epsilon(1e-12));
        CHECK(rep.holds);
    }
    SUBCASE("t = -a collapses to the -a norm") {
        const Vec f = random_vector(rng, n);
        const auto rep = scale.check_interpolation(1.0, -1.0 + 1e-13, 0.5, f);
        CHECK(rep.lhs == doctest::Approx(scale.norm(-1.0, f)).epsilon(1e-6));
        CHECK(rep.holds);
    }
    SUBCASE("index ordering is enforced") {
        const Vec f = random_vector(rng, n);
        CHECK_THROWS_AS(scale.check_interpolation(1.0, 0.8, 0.5, f), InvalidIndicesError);
        CHECK_THROWS_AS(scale.check_interpolation(0.5, -0.6, 0.5, f), InvalidIndicesError);
    }
    SUBCASE("1000 random admissible triples hold") {
        int checked = 0;
        for (int k = 0; k < 1000; ++k) {
            const double a = rng.uniform(0.1, 2.0);
            const double s = rng.uniform(-a + 1e-3, 2.0);
            const double t = rng.uniform(-a + 1e-6, s);
            const Vec f = random_vector(rng, n);
            const auto rep = scale.check_interpolation(a, t, s, f);
            CHECK(rep.holds);
            ++checked;
        }
        CHECK(checked == 1000);
    }
}

TEST_SUITE_END();
