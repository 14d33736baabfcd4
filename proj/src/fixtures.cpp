#include "spanforge/fixtures.hpp"

#include "spanforge/encoding.hpp"
#include "spanforge/errors.hpp"
#include "spanforge/randmat.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace spanforge {

double random_grid_value(std::size_t k, RngStream& rng) {
    const std::uint64_t points = std::uint64_t{2} << k;
    std::uniform_int_distribution<std::uint64_t> pick(0, points - 1);
    return -1.0 + static_cast<double>(pick(rng.engine())) * grid_step(k);
}

Matrix random_sparse_grid_matrix(std::size_t n, std::size_t m, std::size_t k_nnz,
                                 std::size_t l_nnz, std::size_t k, RngStream& rng) {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    std::vector<std::size_t> row_count(n, 0);
    for (std::size_t j = 0; j < m; ++j) {
        std::vector<std::size_t> rows(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        std::shuffle(rows.begin(), rows.end(), rng.engine());
        std::size_t placed = 0;
        for (std::size_t i : rows) {
            if (placed == k_nnz) break;
            if (l_nnz > 0 && row_count[i] == l_nnz) continue;
            const double v = random_grid_value(k, rng);
            if (v == 0.0) continue;
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
            ++row_count[i];
            ++placed;
        }
    }
    return a;
}

SparseFixture random_sparse_fixture(std::size_t n, std::size_t m, std::size_t k_nnz,
                                    std::size_t l_nnz, std::size_t k, std::size_t free_dim,
                                    std::size_t family_size, RngStream& rng) {
    if (family_size < 2) throw MalformedInput("family_size", "need at least two inputs");
    std::vector<Matrix> family;
    for (std::size_t i = 0; i + 1 < family_size; ++i) {
        Matrix a = random_sparse_grid_matrix(n, m, k_nnz, l_nnz, k, rng);
        while (i == 0 && a.isZero(0.0)) a = random_sparse_grid_matrix(n, m, k_nnz, l_nnz, k, rng);
        family.push_back(std::move(a));
    }
    family.push_back(Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
    const Matrix f = sample_gaussian(n, free_dim, rng);
    Vector coef(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < coef.size(); ++j) coef(j) = rng.normal();
    Vector t = family.front() * coef;
    if (free_dim > 0) t += f.col(0);
    if (t.norm() < 1e-6) {
        t = Vector::Zero(static_cast<Eigen::Index>(n));
        t(0) = 1.0;
    }
    return SparseFixture{HighLevelProgram(std::move(t), m, f), std::move(family), k_nnz, l_nnz};
}

std::vector<Matrix> all_grid_matrices(std::size_t n, std::size_t m, std::size_t k) {
    const std::size_t entries = n * m;
    const std::size_t bits = entries * (k + 1);
    if (bits > 20) throw MalformedInput("k", "grid too large to enumerate");
    const std::size_t per = std::size_t{2} << k;
    std::vector<Matrix> out;
    std::vector<std::size_t> digit(entries, 0);
    for (;;) {
        Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        for (std::size_t e = 0; e < entries; ++e)
            a(static_cast<Eigen::Index>(e % n), static_cast<Eigen::Index>(e / n)) =
                -1.0 + static_cast<double>(digit[e]) * grid_step(k);
        out.push_back(std::move(a));
        std::size_t e = 0;
        while (e < entries && ++digit[e] == per) digit[e++] = 0;
        if (e == entries) break;
    }
    return out;
}

ThresholdFixture threshold_fixture(std::size_t n, std::size_t r, RngStream& rng,
                                   std::size_t extra) {
    auto sample = build_rank_program(n, n, r, rng);
    std::vector<Assignment> inputs;
    if (n <= 6) {
        inputs = all_assignments(n);
    } else {
        std::set<Assignment> chosen;
        for (const auto& x : all_assignments(n)) {
            const auto w = static_cast<std::size_t>(std::count(x.begin(), x.end(), 1));
            if (w <= 2 || w + 2 >= n) chosen.insert(x);
        }
        std::bernoulli_distribution coin(0.5);
        for (std::size_t i = 0; i < extra; ++i) {
            Assignment x(n);
            for (auto& b : x) b = coin(rng.engine()) ? 1 : 0;
            chosen.insert(x);
        }
        inputs.assign(chosen.begin(), chosen.end());
    }
    std::vector<Matrix> family;
    for (const auto& x : inputs) family.push_back(0.5 * threshold_matrix(x));
    return ThresholdFixture{std::move(sample.program), std::move(inputs), std::move(family)};
}

SparseFixture sparse_cols_benchmark_fixture(std::size_t index, RngStream& rng) {
    const std::size_t n = 2 + index % 2;
    const std::size_t m = 2 + (index / 2) % 2;
    const std::size_t k_nnz = 1 + (index / 4) % 2;
    return random_sparse_fixture(n, m, k_nnz, 0, 1, (index / 8) % 2, 4, rng);
}

double sparse_cols_normalized_overhead(const SparseFixture& f, std::size_t k) {
    const std::size_t k_nnz = f.k_nnz;
    const auto compiled = compile_sparse_cols(f.program, k_nnz, k);
    const double n = static_cast<double>(f.program.space_dim());
    const double m = static_cast<double>(f.program.num_inputs());
    return measure_overhead(f.program, compiled, f.family) /
           (static_cast<double>(k_nnz) * std::sqrt(m) * std::log2(2.0 * n));
}

double diag_loading_overhead(std::size_t n, RngStream& rng) {
    const auto f = threshold_fixture(n, std::max<std::size_t>(1, n / 2), rng);
    const auto compiled = compile_sparse(f.program, 1, 1, 1);
    return measure_overhead(f.program, compiled, f.family);
}

double threshold_normalized_combined(std::size_t n, std::size_t r, RngStream& rng) {
    const auto f = threshold_fixture(n, r, rng);
    const auto compiled = compile_sparse(f.program, 1, 1, 1);
    std::vector<Assignment> encoded;
    for (const auto& a : f.family) encoded.push_back(compiled.encode(a));
    const double combined = wsize_over_domain(compiled.program, encoded).combined;
    const double scale = std::sqrt(static_cast<double>(r * (n - r + 1))) *
                         std::log2(2.0 * static_cast<double>(n));
    return combined / scale;
}

}  // namespace spanforge
