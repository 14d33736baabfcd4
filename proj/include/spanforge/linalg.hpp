#pragma once

// Dense linear algebra primitives shared by every other module. All routines
// are pure functions of their arguments. Matrices with zero columns are legal
// and stand for empty vector systems.

#include <Eigen/Dense>

#include <cstddef>

namespace spanforge {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative threshold (against the largest singular value) below which a
/// singular value counts as zero.
inline constexpr double kDefaultTolerance = 1e-9;

enum class SvdVectors { thin, full };

struct SvdResult {
    Matrix left;              ///< U; rows x min(rows, cols), or rows x rows when full
    Vector singular_values;   ///< non-increasing
    Matrix right;             ///< V; cols x min(rows, cols), or cols x cols when full
    std::size_t numerical_rank = 0;
};

/// Throws SolverFailure if the decomposition does not converge and
/// MalformedInput if `m` has non-finite entries.
SvdResult svd(const Matrix& m, double tol = kDefaultTolerance,
              SvdVectors vectors = SvdVectors::thin);

std::size_t numerical_rank(const Matrix& m, double tol = kDefaultTolerance);

/// Minimum 2-norm solution of `m w = b`. Throws Inconsistent when `b` has a
/// component outside the numerical column span of `m` larger than
/// tol * (|m| |w| + |b|).
Vector min_norm_solve(const Matrix& m, const Vector& b,
                      double tol = kDefaultTolerance);

/// Orthonormal basis (as columns) of the numerical null space of `m`.
Matrix nullspace_basis(const Matrix& m, double tol = kDefaultTolerance);

/// Orthonormal basis of the numerical column span of `s`.
Matrix column_space_basis(const Matrix& s, double tol = kDefaultTolerance);

/// Component of `t` orthogonal to the column span of `s`.
Vector project_complement(const Matrix& s, const Vector& t,
                          double tol = kDefaultTolerance);

struct HyperplaneMinimum {
    double value = 0.0;
    Vector y;
};

/// min |B y|^2 subject to <c, y> = 1, with an attaining y.
///
/// If the null space of B (equivalently of G = B^T B) contains a direction z
/// with <c, z> != 0 the minimum is 0. Otherwise it equals 1 / <c, G^+ c> and
/// is attained at G^+ c / <c, G^+ c>. Throws ZeroConstraint if c = 0.
HyperplaneMinimum min_quadratic_on_hyperplane(const Matrix& b, const Vector& c,
                                              double tol = kDefaultTolerance);

/// Horizontal concatenation [a | b]; both must have the same row count.
Matrix hcat(const Matrix& a, const Matrix& b);

}  // namespace spanforge
