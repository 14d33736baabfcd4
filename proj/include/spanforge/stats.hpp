#pragma once

// Small statistics toolkit for the Monte Carlo experiments.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace spanforge {

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

struct MeanEstimate {
    double mean = 0.0;
    double std_error = 0.0;  ///< sample standard deviation / sqrt(count)
    std::size_t count = 0;
};

MeanEstimate mean_and_se(std::span<const double> values);

/// Linear-interpolation quantile (sorted order statistics, p in [0, 1]).
double quantile(std::vector<double> values, double p);
double median(std::vector<double> values);

/// sup |F_n - F| for the empirical CDF of `samples`.
double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
/// sup |F_a - F_b| between two empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);
/// fit_line on (log x, log y).
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

double normal_cdf(double x);

/// Standard error of a proportion p estimated from `count` trials.
double proportion_se(double p, std::size_t count);

}  // namespace spanforge
