#include "helpers.hpp"
#include "spanforge/randmat.hpp"
#include "spanforge/stats.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace spanforge;
using namespace spanforge::test;

namespace {

// Independent oracle: integrate the limit density numerically.
double quadrature_cdf(double x) {
    boost::math::quadrature::tanh_sinh<double> integrator;
    return integrator.integrate([](double t) { return edelman_density(t); }, 0.0, x);
}

struct WishartSummary {
    std::vector<double> trace, lambda_min, lambda_max;
};

void record(WishartSummary& s, const Matrix& w) {
    const Eigen::SelfAdjointEigenSolver<Matrix> es(w, Eigen::EigenvaluesOnly);
    s.trace.push_back(w.trace());
    s.lambda_min.push_back(es.eigenvalues().minCoeff());
    s.lambda_max.push_back(es.eigenvalues().maxCoeff());
}

}  // namespace

TEST_SUITE("randmat") {

TEST_CASE("Gaussian entries have mean 0 and variance 1") {
    RngStream rng(80);
    const Matrix a = sample_gaussian(100, 1000, rng);
    std::vector<double> xs(a.data(), a.data() + a.size());
    const auto est = mean_and_se(xs);
    CHECK(std::abs(est.mean) <= 3 * est.std_error);
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) sq[i] = xs[i] * xs[i];
    const auto var = mean_and_se(sq);
    CHECK(std::abs(var.mean - 1.0) <= 3 * var.std_error);
}

TEST_CASE("linear combinations of columns are normal with summed variances") {
    RngStream rng(81);
    const Matrix a = sample_gaussian(50000, 2, rng);
    const double c1 = 2.0, c2 = -0.5;
    std::vector<double> z(static_cast<std::size_t>(a.rows()));
    for (Eigen::Index i = 0; i < a.rows(); ++i) z[static_cast<std::size_t>(i)] = c1 * a(i, 0) + c2 * a(i, 1);
    std::vector<double> sq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) sq[i] = z[i] * z[i];
    const auto var = mean_and_se(sq);
    CHECK(std::abs(var.mean - (c1 * c1 + c2 * c2)) <= 3 * var.std_error);
    const double sd = std::sqrt(c1 * c1 + c2 * c2);
    CHECK(ks_one_sample(z, [&](double x) { return normal_cdf(x / sd); }) < 0.02);
}

TEST_CASE("Bartlett factor with one row is a chi-square square root") {
    RngStream rng(82);
    std::vector<double> xs(100000);
    for (auto& x : xs) {
        const Matrix t = sample_bartlett(1, 7, rng);
        x = t(0, 0) * t(0, 0);
    }
    const auto est = mean_and_se(xs);
    CHECK(std::abs(est.mean - 7.0) <= 3 * est.std_error);
}

TEST_CASE("Bartlett factor is lower triangular with positive diagonal") {
    RngStream rng(83);
    const Matrix t = sample_bartlett(5, 8, rng);
    CHECK(t.isLowerTriangular(0.0));
    for (Eigen::Index i = 0; i < 5; ++i) CHECK(t(i, i) > 0.0);
}

TEST_CASE("Bartlett sampling matches direct A A^T sampling") {
    const std::size_t n = 3, m = 5, draws = 100000;
    RngStream rb(84, 0), rd(84, 1);
    WishartSummary bart, direct;
    std::vector<double> diag_b, diag_d;
    for (std::size_t i = 0; i < draws; ++i) {
        const Matrix t = sample_bartlett(n, m, rb);
        const Matrix wb = t * t.transpose();
        const Matrix a = sample_gaussian(n, m, rd);
        const Matrix wd = a * a.transpose();
        record(bart, wb);
        record(direct, wd);
        diag_b.push_back(wb(2, 2));
        diag_d.push_back(wd(2, 2));
    }
    CHECK(ks_two_sample(bart.trace, direct.trace) <= 0.02);
    CHECK(ks_two_sample(bart.lambda_min, direct.lambda_min) <= 0.02);
    CHECK(ks_two_sample(bart.lambda_max, direct.lambda_max) <= 0.02);
    CHECK(ks_two_sample(diag_b, diag_d) <= 0.02);
    const auto est = mean_and_se(diag_b);
    CHECK(std::abs(est.mean - double(m)) <= 3 * est.std_error);
}

TEST_CASE("spectral statistics on fixed matrices") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 1;
    CHECK(spectral_stats(d, 2).c_r == doctest::Approx(1.0));
    CHECK(std::isinf(spectral_stats(d, 3).c_r));
    CHECK(std::isinf(spectral_stats(d, 3).c));

    const auto id = spectral_stats(Matrix::Identity(4, 4), 4);
    CHECK(id.c == doctest::Approx(1.0));
    CHECK(id.sigma_min == doctest::Approx(1.0));

    Matrix two = Matrix::Zero(2, 2);
    two(0, 0) = 2;
    two(1, 1) = 1;
    CHECK(spectral_stats(two, 2).c_r == doctest::Approx(std::sqrt((0.25 + 1.0) / 2.0)));
    CHECK(spectral_stats(two, 1).c_r == doctest::Approx(0.5));
}

TEST_CASE("c(A) is the scaled Euclidean norm of the inverse") {
    for (std::size_t s = 0; s < 50; ++s) {
        RngStream rng(85, s);
        const std::size_t n = 1 + s % 8;
        const Matrix a = sample_gaussian(n, n, rng);
        const double expected = a.inverse().norm() / std::sqrt(double(n));
        CHECK(spectral_stats(a, n).c == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("c_r is bracketed by the extreme reciprocals") {
    for (std::size_t s = 0; s < 100; ++s) {
        RngStream rng(86, s);
        const std::size_t n = 2 + s % 5, m = 2 + (s / 5) % 5;
        const Matrix a = sample_gaussian(n, m, rng);
        const auto sv = svd(a);
        const std::size_t rank = std::min(n, m);
        for (std::size_t r = 1; r <= rank; ++r) {
            const auto st = spectral_stats(a, r);
            CHECK(st.c_r >= 1.0 / st.sigma_max * (1 - 1e-12));
            CHECK(st.c_r <= 1.0 / sv.singular_values(static_cast<Eigen::Index>(r - 1)) * (1 + 1e-12));
        }
        CHECK(spectral_stats(a, 1).sigma_min <= spectral_stats(a, 1).sigma_max);
    }
}

TEST_CASE("power iteration agrees with the SVD") {
    RngStream rng(87);
    const Matrix a = sample_gaussian(6, 6, rng);
    CHECK(spectral_norm_power(a) == doctest::Approx(svd(a).singular_values(0)).epsilon(1e-9));
}

TEST_CASE("limit law of n lambda_min") {
    CHECK(edelman_cdf(0.0) == 0.0);
    CHECK(edelman_cdf(1e6) == doctest::Approx(1.0));
    for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0})
        CHECK(edelman_cdf(x) == doctest::Approx(quadrature_cdf(x)).epsilon(1e-10));

    // Median from the density alone: quadrature plus bracketing root search.
    boost::uintmax_t iterations = 200;
    const auto bracket = boost::math::tools::toms748_solve(
        [](double x) { return quadrature_cdf(x) - 0.5; }, 1e-6, 5.0,
        boost::math::tools::eps_tolerance<double>(40), iterations);
    const double oracle = (bracket.first + bracket.second) / 2.0;
    CHECK(oracle == doctest::Approx(0.29676).epsilon(1e-4));
    CHECK(edelman_median() == doctest::Approx(oracle).epsilon(1e-9));
    const double u = -1.0 + std::sqrt(1.0 + 2.0 * std::log(2.0));
    CHECK(edelman_median() == doctest::Approx(u * u).epsilon(1e-12));
}

TEST_CASE("n lambda_min at moderate n follows the limit law") {
    const auto e = exp_lambda_min_cdf(30, 3000, 88);
    CHECK(e.samples.size() == 3000);
    CHECK(e.ks <= 0.05);
    CHECK(e.limit_median == edelman_median());
}

TEST_CASE("inverse Wishart trace") {
    const auto a = exp_inverse_wishart_trace(3, 8, 20000, 89);
    CHECK(a.expected == 0.75);
    CHECK(std::abs(a.estimate.mean - a.expected) <= 3 * a.estimate.std_error);
    const auto b = exp_inverse_wishart_trace(5, 10, 20000, 90);
    CHECK(b.expected == 1.25);
    CHECK(std::abs(b.estimate.mean - b.expected) <= 3 * b.estimate.std_error);
}

TEST_CASE("c-bounded exceedance at n = 1 has a closed form") {
    const double delta = 2.0;
    const auto e = exp_c_bounded({1}, 50000, delta, 91);
    REQUIRE(e.rows.size() == 1);
    const double exact = 2.0 * normal_cdf(1.0 / delta) - 1.0;
    CHECK(std::abs(e.rows[0].probability - exact) <= 3 * proportion_se(exact, 50000));
    const auto none = exp_c_bounded({5}, 2000, 1e12, 92);
    CHECK(none.rows[0].exceedances == 0);
}

TEST_CASE("c values from the Bartlett factor match direct inversion") {
    const auto fast = sample_c_values(6, 5000, 93);
    std::vector<double> direct;
    for (std::size_t i = 0; i < 5000; ++i) {
        RngStream rng(94, i);
        direct.push_back(spectral_stats(sample_gaussian(6, 6, rng), 6).c);
    }
    CHECK(ks_two_sample(fast, direct) <= 0.04);
}

TEST_CASE("1/sigma_min dominates c(A)") {
    const auto e = exp_ratio_scaling({4, 8, 16}, 300, 95);
    for (const auto& row : e.rows) CHECK(row.min_ratio >= 1.0 - 1e-12);
    CHECK(e.rows.front().median_ratio < e.rows.back().median_ratio);
}

TEST_CASE("Gaussian matrices are orthogonally invariant") {
    const std::size_t n = 4, draws = 5000;
    RngStream qrng(96);
    const Matrix q = Eigen::HouseholderQR<Matrix>(sample_gaussian(n, n, qrng)).householderQ();
    std::vector<double> rotated, plain;
    for (std::size_t i = 0; i < draws; ++i) {
        RngStream a(97, i), b(98, i);
        const Matrix qa = q * sample_gaussian(n, n, a);
        const Matrix g = sample_gaussian(n, n, b);
        rotated.push_back(svd(qa.topLeftCorner(2, 2)).singular_values(1));
        plain.push_back(svd(g.topLeftCorner(2, 2)).singular_values(1));
    }
    CHECK(ks_two_sample(rotated, plain) <= 0.05);
}

}
