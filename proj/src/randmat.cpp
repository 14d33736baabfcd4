#include "spanforge/randmat.hpp"

#include "spanforge/errors.hpp"
#include "spanforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spanforge {

namespace {

// Distinct stream families for distinct problem sizes within one experiment.
std::uint64_t stream_of(std::size_t n, std::size_t trial) {
    return (static_cast<std::uint64_t>(n) << 40) ^ static_cast<std::uint64_t>(trial);
}

double inverse_frobenius_sq_lower(const Matrix& t) {
    const Matrix inv = t.triangularView<Eigen::Lower>().solve(
        Matrix::Identity(t.rows(), t.cols()));
    return inv.squaredNorm();
}

}  // namespace

Matrix sample_gaussian(std::size_t n, std::size_t m, RngStream& rng) {
    Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.normal();
    return a;
}

Matrix sample_bartlett(std::size_t n, std::size_t m, RngStream& rng) {
    if (m < n) throw MalformedInput("m", "Bartlett factor needs m >= n");
    Matrix t = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        for (Eigen::Index j = 0; j < ii; ++j) t(ii, j) = rng.normal();
        t(ii, ii) = std::sqrt(rng.chi_square(static_cast<double>(m - i)));
    }
    return t;
}

SpectralStats spectral_stats(const Matrix& a, std::size_t r, double tol) {
    const auto s = svd(a, tol).singular_values;
    SpectralStats out;
    const auto k = static_cast<std::size_t>(s.size());
    if (k == 0) {
        out.c_r = out.c = r == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return out;
    }
    out.sigma_max = s(0);
    out.sigma_min = s(s.size() - 1);
    const double cutoff = tol * s(0);
    auto quad_mean_recip = [&](std::size_t count) {
        if (count == 0) return 0.0;
        if (count > k) return std::numeric_limits<double>::infinity();
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double v = s(static_cast<Eigen::Index>(i));
            if (!(v > cutoff)) return std::numeric_limits<double>::infinity();
            acc += 1.0 / (v * v);
        }
        return std::sqrt(acc / static_cast<double>(count));
    };
    out.c_r = quad_mean_recip(r);
    out.c = quad_mean_recip(static_cast<std::size_t>(a.rows()));
    return out;
}

double edelman_density(double x) {
    if (!(x > 0.0)) return 0.0;
    const double rx = std::sqrt(x);
    return (1.0 + rx) / (2.0 * rx) * std::exp(-(0.5 * x + rx));
}

double edelman_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    return 1.0 - std::exp(-(0.5 * x + std::sqrt(x)));
}

double edelman_median() {
    const double u = -1.0 + std::sqrt(1.0 + 2.0 * std::log(2.0));
    return u * u;
}

TraceExperiment exp_inverse_wishart_trace(std::size_t n, std::size_t m, std::size_t trials,
                                          std::uint64_t seed) {
    if (m <= n + 1) throw MalformedInput("m", "the inverse Wishart mean needs m > n + 1");
    std::vector<double> values(trials);
    parallel_for(trials, [&](std::size_t i) {
        RngStream rng(seed, stream_of(n, i));
        const Matrix a = sample_gaussian(n, m, rng);
        const Matrix w = a * a.transpose();
        values[i] = w.llt().solve(Matrix::Identity(w.rows(), w.cols())).trace();
    });
    TraceExperiment out;
    out.n = n;
    out.m = m;
    out.trials = trials;
    out.seed = seed;
    out.expected = static_cast<double>(n) / static_cast<double>(m - n - 1);
    out.estimate = mean_and_se(values);
    return out;
}

TraceExperiment exp_leading_block_trace(std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (n < 4) throw MalformedInput("n", "the leading block needs n >= 4");
    const auto b = static_cast<Eigen::Index>(n - 2);
    std::vector<double> values(trials);
    parallel_for(trials, [&](std::size_t i) {
        RngStream rng(seed, stream_of(n, i));
        const Matrix t = sample_bartlett(n, n, rng);
        values[i] = inverse_frobenius_sq_lower(t.topLeftCorner(b, b));
    });
    TraceExperiment out;
    out.n = n - 2;
    out.m = n;
    out.trials = trials;
    out.seed = seed;
    out.expected = static_cast<double>(n - 2);
    out.estimate = mean_and_se(values);
    return out;
}

LambdaMinExperiment exp_lambda_min_cdf(std::size_t n, std::size_t trials, std::uint64_t seed) {
    LambdaMinExperiment out;
    out.n = n;
    out.trials = trials;
    out.seed = seed;
    out.samples.resize(trials);
    parallel_for(trials, [&](std::size_t i) {
        RngStream rng(seed, stream_of(n, i));
        const Matrix t = sample_bartlett(n, n, rng);
        const Matrix w = t * t.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(w, Eigen::EigenvaluesOnly);
        if (eig.info() != Eigen::Success) throw SolverFailure(n, n);
        out.samples[i] = static_cast<double>(n) * eig.eigenvalues()(0);
    });
    out.ks = ks_one_sample(out.samples, edelman_cdf);
    out.empirical_median = median(out.samples);
    out.limit_median = edelman_median();
    return out;
}

std::vector<double> sample_c_values(std::size_t n, std::size_t trials, std::uint64_t seed) {
    std::vector<double> c(trials);
    parallel_for(trials, [&](std::size_t i) {
        RngStream rng(seed, stream_of(n, i));
        const Matrix t = sample_bartlett(n, n, rng);
        c[i] = std::sqrt(inverse_frobenius_sq_lower(t) / static_cast<double>(n));
    });
    return c;
}

CBoundedExperiment exp_c_bounded(const std::vector<std::size_t>& n_list, std::size_t trials,
                                 double delta, std::uint64_t seed) {
    CBoundedExperiment out;
    out.delta = delta;
    out.seed = seed;
    for (std::size_t n : n_list) {
        const auto c = sample_c_values(n, trials, seed);
        ExceedanceRow row;
        row.n = n;
        row.trials = trials;
        row.exceedances = static_cast<std::size_t>(
            std::count_if(c.begin(), c.end(), [delta](double v) { return v > delta; }));
        row.probability = trials ? static_cast<double>(row.exceedances) / static_cast<double>(trials)
                                 : 0.0;
        row.std_error = proportion_se(row.probability, trials);
        out.rows.push_back(row);
    }
    return out;
}

double spectral_norm_power(const Matrix& m, double rel_tol, std::size_t max_iter) {
    if (m.size() == 0) return 0.0;
    Vector x = Vector::Ones(m.cols()) / std::sqrt(static_cast<double>(m.cols()));
    double lambda = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        Vector y = m.transpose() * (m * x);
        const double next = y.norm();
        if (next == 0.0) return 0.0;
        x = y / next;
        const bool done = std::abs(next - lambda) <= rel_tol * next;
        lambda = next;
        if (done) break;
    }
    return std::sqrt(lambda);
}

RatioExperiment exp_ratio_scaling(const std::vector<std::size_t>& n_list, std::size_t trials,
                                  std::uint64_t seed) {
    RatioExperiment out;
    out.seed = seed;
    std::vector<double> ns, medians;
    for (std::size_t n : n_list) {
        std::vector<double> ratio(trials);
        parallel_for(trials, [&](std::size_t i) {
            RngStream rng(seed, stream_of(n, i));
            const Matrix t = sample_bartlett(n, n, rng);
            const Matrix inv = t.triangularView<Eigen::Lower>().solve(
                Matrix::Identity(t.rows(), t.cols()));
            const double c = inv.norm() / std::sqrt(static_cast<double>(n));
            ratio[i] = spectral_norm_power(inv) / c;
        });
        RatioRow row;
        row.n = n;
        row.trials = trials;
        row.median_ratio = median(ratio);
        row.min_ratio = *std::min_element(ratio.begin(), ratio.end());
        out.rows.push_back(row);
        ns.push_back(static_cast<double>(n));
        medians.push_back(row.median_ratio);
    }
    if (ns.size() >= 2) out.fit = fit_loglog(ns, medians);
    return out;
}

}  // namespace spanforge
