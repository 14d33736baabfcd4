#pragma once

// Gaussian and Wishart sampling, spectral statistics, and the Monte Carlo
// experiments on random matrices.
//
// G(n, m): n x m matrices with i.i.d. N(0, 1) entries.
// W(n, m): distribution of A A^T for A ~ G(n, m).
// c_r(A):  quadratic mean of 1/sigma_i over the r largest singular values;
//          c(A) = c_n(A), which equals |A^{-1}|_E / sqrt(n) for invertible A.

#include "spanforge/linalg.hpp"
#include "spanforge/rng.hpp"
#include "spanforge/stats.hpp"

#include <cstdint>
#include <vector>

namespace spanforge {

/// Entries drawn in row-major order.
Matrix sample_gaussian(std::size_t n, std::size_t m, RngStream& rng);

/// Lower-triangular T with T T^T ~ W(n, m): diagonal sqrt(chi2_{m-i+1})
/// (1-based i) and N(0, 1) below the diagonal. Requires m >= n.
Matrix sample_bartlett(std::size_t n, std::size_t m, RngStream& rng);

struct SpectralStats {
    double c_r = 0.0;        ///< +inf when fewer than r singular values are nonzero
    double c = 0.0;          ///< c_n with n = rows; +inf when rank < n
    double sigma_min = 0.0;  ///< smallest of the min(rows, cols) singular values
    double sigma_max = 0.0;
};

SpectralStats spectral_stats(const Matrix& a, std::size_t r, double tol = kDefaultTolerance);

/// Limit law of n * lambda_min(W(n, n)): density (1 + sqrt x) / (2 sqrt x)
/// e^{-(x/2 + sqrt x)} and CDF 1 - e^{-(x/2 + sqrt x)}.
double edelman_density(double x);
double edelman_cdf(double x);
/// Root of x/2 + sqrt(x) = ln 2.
double edelman_median();

struct TraceExperiment {
    std::size_t n = 0, m = 0, trials = 0;
    std::uint64_t seed = 0;
    double expected = 0.0;   ///< n / (m - n - 1)
    MeanEstimate estimate;   ///< of tr W^{-1}
};

/// E[tr W^{-1}] for W ~ W(n, m), m > n + 1, sampled as A A^T.
TraceExperiment exp_inverse_wishart_trace(std::size_t n, std::size_t m, std::size_t trials,
                                          std::uint64_t seed);

/// E[|T11^{-1}|_E^2] where T11 is the leading (n-2) x (n-2) block of the
/// Bartlett factor of W(n, n); the expected value is n - 2.
TraceExperiment exp_leading_block_trace(std::size_t n, std::size_t trials, std::uint64_t seed);

struct LambdaMinExperiment {
    std::size_t n = 0, trials = 0;
    std::uint64_t seed = 0;
    double ks = 0.0;                 ///< against edelman_cdf
    double empirical_median = 0.0;
    double limit_median = 0.0;
    std::vector<double> samples;     ///< n * lambda_min per trial
};

LambdaMinExperiment exp_lambda_min_cdf(std::size_t n, std::size_t trials, std::uint64_t seed);

struct ExceedanceRow {
    std::size_t n = 0, trials = 0, exceedances = 0;
    double probability = 0.0;
    double std_error = 0.0;
};

struct CBoundedExperiment {
    double delta = 0.0;
    std::uint64_t seed = 0;
    std::vector<ExceedanceRow> rows;
};

/// Pr[c(A) > delta] for A ~ G(n, n), per n.
CBoundedExperiment exp_c_bounded(const std::vector<std::size_t>& n_list, std::size_t trials,
                                 double delta, std::uint64_t seed);

/// c(A) for A ~ G(n, n) per trial, via the Bartlett factor.
std::vector<double> sample_c_values(std::size_t n, std::size_t trials, std::uint64_t seed);

struct RatioRow {
    std::size_t n = 0, trials = 0;
    double median_ratio = 0.0;   ///< median of (1/sigma_min(A)) / c(A)
    double min_ratio = 0.0;
};

struct RatioExperiment {
    std::uint64_t seed = 0;
    std::vector<RatioRow> rows;
    LineFit fit;                 ///< log median ratio against log n
};

RatioExperiment exp_ratio_scaling(const std::vector<std::size_t>& n_list, std::size_t trials,
                                  std::uint64_t seed);

/// Largest singular value of a square matrix by power iteration on M^T M.
double spectral_norm_power(const Matrix& m, double rel_tol = 1e-12, std::size_t max_iter = 5000);

}  // namespace spanforge
