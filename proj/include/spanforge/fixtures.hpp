#pragma once

// Deterministic instance generators shared by the calibration tool, the unit
// tests and the acceptance suite.

#include "spanforge/compile.hpp"
#include "spanforge/highlevel.hpp"
#include "spanforge/programs.hpp"
#include "spanforge/rng.hpp"

#include <vector>

namespace spanforge {

/// Uniform draw from the precision-k grid {-1, -1 + 2^-k, ..., 1 - 2^-k}.
double random_grid_value(std::size_t k, RngStream& rng);

/// n x m grid matrix with at most k_nnz nonzeros per column (and at most
/// l_nnz per row when l_nnz > 0). Nonzero positions are uniform.
Matrix random_sparse_grid_matrix(std::size_t n, std::size_t m, std::size_t k_nnz,
                                 std::size_t l_nnz, std::size_t k, RngStream& rng);

/// A high-level program with a random target and `free_dim` random free
/// vectors, together with an input family containing both decisions: the
/// first matrix is made positive by moving the target into its span, the
/// last is the zero matrix.
struct SparseFixture {
    HighLevelProgram program;
    std::vector<Matrix> family;
    std::size_t k_nnz = 0;
    std::size_t l_nnz = 0;
};

SparseFixture random_sparse_fixture(std::size_t n, std::size_t m, std::size_t k_nnz,
                                    std::size_t l_nnz, std::size_t k, std::size_t free_dim,
                                    std::size_t family_size, RngStream& rng);

/// Every grid matrix of the given shape (requires (2^{k+1})^{nm} <= 2^20).
std::vector<Matrix> all_grid_matrices(std::size_t n, std::size_t m, std::size_t k);

/// Rank program for the threshold reduction together with the matrices
/// diag(x)/2 for the given inputs x (1/2 is on every grid with k >= 1).
struct ThresholdFixture {
    HighLevelProgram program;
    std::vector<Assignment> inputs;
    std::vector<Matrix> family;
};

/// All 2^n inputs for n <= 6; for larger n every input of weight <= 2 or
/// >= n - 2 plus `extra` uniformly drawn ones.
ThresholdFixture threshold_fixture(std::size_t n, std::size_t r, RngStream& rng,
                                   std::size_t extra = 16);

/// Instance `index` (0..19 cycles through n, m in {2, 3}, k_nnz in {1, 2},
/// zero or one free vector) for the column-sparse witness bound.
SparseFixture sparse_cols_benchmark_fixture(std::size_t index, RngStream& rng);

/// measure_overhead of column-sparse compilation at precision k divided by
/// k_nnz sqrt(m) log2(2n).
double sparse_cols_normalized_overhead(const SparseFixture& f, std::size_t k);

/// measure_overhead of loading diag(x)/2 with one nonzero per row and column
/// (precision 1) into the rank program with r = max(1, n/2).
double diag_loading_overhead(std::size_t n, RngStream& rng);

/// Combined wsize of the compiled threshold program over its fixture inputs
/// divided by sqrt(r (n - r + 1)) log2(2n).
double threshold_normalized_combined(std::size_t n, std::size_t r, RngStream& rng);

}  // namespace spanforge
