#pragma once

// Concrete high-level span programs: the randomized rank program, the
// threshold reduction through diag(x), and two lower-bound examples.

#include "spanforge/highlevel.hpp"
#include "spanforge/rng.hpp"
#include "spanforge/span_program.hpp"

#include <cstdint>
#include <vector>

namespace spanforge {

struct RankInstance {
    Matrix a;            ///< n x m, entries in [-1, 1]
    std::size_t r = 0;
    double L = 0.0;      ///< promised bound on c_r(A) when rank A >= r
};

/// Decides whether (t + span V) meets span A for Gaussian t in R^n and
/// V in R^{n x s}, s = n - r.
struct RankProgramSample {
    HighLevelProgram program;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::size_t s = 0;
};

/// Draws t then V (row-major) from `rng`.
RankProgramSample build_rank_program(std::size_t n, std::size_t m, std::size_t r,
                                     RngStream& rng);

/// evaluate_hl on a freshly drawn rank program; 1 iff rank A >= r except on
/// a probability-zero event.
bool rank_decision(const RankInstance& instance, RngStream& rng,
                   double tol = kDefaultTolerance);

/// diag(x).
Matrix threshold_matrix(const Assignment& x);

/// 1 iff x has at least r ones.
bool threshold_function(const Assignment& x, std::size_t r);

/// Target (1, ..., 1) in R^n, m input columns. The promise: every column is
/// a +-1 vector that is either all ones or balanced. Throws MalformedInput
/// for odd n.
HighLevelProgram grover_dj_program(std::size_t n, std::size_t m);

/// Every n x m matrix satisfying the promise of grover_dj_program.
std::vector<Matrix> grover_dj_family(std::size_t n, std::size_t m);

/// Target e_0 in R^{n+1} and a single input column e_0 + sum_{x_i = 1} e_i.
HighLevelProgram unique_search_program(std::size_t n);

/// The (n+1) x 1 input matrix for x in {0,1}^n.
Matrix unique_search_input(const Assignment& x);

}  // namespace spanforge
