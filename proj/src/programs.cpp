#include "spanforge/programs.hpp"

#include "spanforge/errors.hpp"
#include "spanforge/randmat.hpp"

#include <algorithm>
#include <string>

namespace spanforge {

RankProgramSample build_rank_program(std::size_t n, std::size_t m, std::size_t r,
                                     RngStream& rng) {
    if (n == 0) throw MalformedInput("n", "must be positive");
    if (r > n) throw MalformedInput("r", "must not exceed n");
    const std::size_t s = n - r;
    Vector t(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = rng.normal();
    Matrix v = sample_gaussian(n, s, rng);
    return RankProgramSample{
        HighLevelProgram(std::move(t), m, std::move(v),
                         "n x m matrices with entries in [-1, 1]; rank >= r implies c_r <= L"),
        rng.seed(), rng.stream_id(), s};
}

bool rank_decision(const RankInstance& instance, RngStream& rng, double tol) {
    const auto n = static_cast<std::size_t>(instance.a.rows());
    const auto m = static_cast<std::size_t>(instance.a.cols());
    const auto sample = build_rank_program(n, m, instance.r, rng);
    return evaluate_hl(sample.program, instance.a, tol);
}

Matrix threshold_matrix(const Assignment& x) {
    Matrix d = Matrix::Zero(static_cast<Eigen::Index>(x.size()),
                            static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i)
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = x[i] ? 1.0 : 0.0;
    return d;
}

bool threshold_function(const Assignment& x, std::size_t r) {
    return static_cast<std::size_t>(std::count(x.begin(), x.end(), std::uint8_t{1})) >= r;
}

HighLevelProgram grover_dj_program(std::size_t n, std::size_t m) {
    if (n == 0 || n % 2 != 0) throw MalformedInput("n", "must be a positive even number");
    return HighLevelProgram(Vector::Ones(static_cast<Eigen::Index>(n)), m, Matrix{},
                            "columns are +-1 vectors, each all ones or balanced");
}

std::vector<Matrix> grover_dj_family(std::size_t n, std::size_t m) {
    if (n == 0 || n % 2 != 0) throw MalformedInput("n", "must be a positive even number");
    if (n > 20) throw MalformedInput("n", "too large to enumerate");
    std::vector<Vector> columns{Vector::Ones(static_cast<Eigen::Index>(n))};
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != n / 2) continue;
        Vector c(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            c(static_cast<Eigen::Index>(i)) = (mask >> i) & 1U ? -1.0 : 1.0;
        columns.push_back(std::move(c));
    }
    std::vector<Matrix> out;
    std::vector<std::size_t> pick(m, 0);
    for (;;) {
        Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        for (std::size_t j = 0; j < m; ++j) a.col(static_cast<Eigen::Index>(j)) = columns[pick[j]];
        out.push_back(std::move(a));
        std::size_t j = 0;
        while (j < m && ++pick[j] == columns.size()) pick[j++] = 0;
        if (j == m) break;
    }
    return out;
}

HighLevelProgram unique_search_program(std::size_t n) {
    Vector t = Vector::Zero(static_cast<Eigen::Index>(n + 1));
    t(0) = 1.0;
    return HighLevelProgram(std::move(t), 1, Matrix{}, "inputs of Hamming weight at most 1");
}

Matrix unique_search_input(const Assignment& x) {
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(x.size() + 1), 1);
    a(0, 0) = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) a(static_cast<Eigen::Index>(i + 1), 0) = 1.0;
    return a;
}

}  // namespace spanforge
