#include "spanforge/linalg.hpp"

#include "spanforge/errors.hpp"

#include <Eigen/SVD>

namespace spanforge {

namespace {

std::size_t rank_from(const Vector& sigma, double tol) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    const double cut = tol * sigma(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma(i) > cut) ++rank;
    return rank;
}

bool reconstructs(const Matrix& m, const SvdResult& r) {
    if (!r.singular_values.allFinite() || !r.left.allFinite() || !r.right.allFinite())
        return false;
    const auto k = r.singular_values.size();
    const Matrix back = r.left.leftCols(k) * r.singular_values.asDiagonal() *
                        r.right.leftCols(k).transpose();
    const double scale = static_cast<double>(std::max(m.rows(), m.cols()));
    return (back - m).norm() <= 1e-12 * scale * std::max(r.singular_values(0), 1e-300);
}

}  // namespace

SvdResult svd(const Matrix& m, double tol, SvdVectors vectors) {
    if (!m.allFinite()) throw MalformedInput("matrix", "non-finite entry");

    const auto rows = m.rows();
    const auto cols = m.cols();
    SvdResult out;
    if (rows == 0 || cols == 0) {
        const bool full = vectors == SvdVectors::full;
        out.left = full ? Matrix::Identity(rows, rows) : Matrix(rows, 0);
        out.right = full ? Matrix::Identity(cols, cols) : Matrix(cols, 0);
        out.singular_values = Vector(0);
        return out;
    }

    const unsigned options = vectors == SvdVectors::full
                                 ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                                 : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::BDCSVD<Matrix> dec(m, options);
    if (dec.info() != Eigen::Success)
        throw SolverFailure(static_cast<std::size_t>(rows),
                            static_cast<std::size_t>(cols));
    out.left = dec.matrixU();
    out.right = dec.matrixV();
    out.singular_values = dec.singularValues();

    // BDCSVD in Eigen 3.4 can return NaN or wrong small singular values on
    // matrices with many exact zeros. Such results are caught by their
    // reconstruction error and recomputed by one-sided Jacobi.
    if (!reconstructs(m, out)) {
        Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> jac(m, options);
        if (jac.info() != Eigen::Success || !jac.singularValues().allFinite())
            throw SolverFailure(static_cast<std::size_t>(rows),
                                static_cast<std::size_t>(cols));
        out.left = jac.matrixU();
        out.right = jac.matrixV();
        out.singular_values = jac.singularValues();
    }
    out.numerical_rank = rank_from(out.singular_values, tol);
    return out;
}

std::size_t numerical_rank(const Matrix& m, double tol) {
    return svd(m, tol).numerical_rank;
}

Vector min_norm_solve(const Matrix& m, const Vector& b, double tol) {
    if (m.rows() != b.size())
        throw DimensionMismatch("min_norm_solve: matrix has " +
                                std::to_string(m.rows()) + " rows, rhs has " +
                                std::to_string(b.size()));

    const SvdResult dec = svd(m, tol);
    Vector w = Vector::Zero(m.cols());
    for (std::size_t i = 0; i < dec.numerical_rank; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        w += dec.right.col(k) * (dec.left.col(k).dot(b) / dec.singular_values(k));
    }

    const double spectral = dec.singular_values.size() ? dec.singular_values(0) : 0.0;
    const double residual = (b - m * w).norm();
    if (residual > tol * (spectral * w.norm() + b.norm()))
        throw Inconsistent("right-hand side has a component of norm " +
                           std::to_string(residual) + " outside the column span");
    return w;
}

Matrix nullspace_basis(const Matrix& m, double tol) {
    const SvdResult dec = svd(m, tol, SvdVectors::full);
    const auto cols = m.cols();
    return dec.right.rightCols(cols - static_cast<Eigen::Index>(dec.numerical_rank));
}

Matrix column_space_basis(const Matrix& s, double tol) {
    const SvdResult dec = svd(s, tol);
    return dec.left.leftCols(static_cast<Eigen::Index>(dec.numerical_rank));
}

Vector project_complement(const Matrix& s, const Vector& t, double tol) {
    if (s.rows() != t.size())
        throw DimensionMismatch("project_complement: span lives in R^" +
                                std::to_string(s.rows()) + ", vector in R^" +
                                std::to_string(t.size()));
    if (s.cols() == 0) return t;
    const Matrix basis = column_space_basis(s, tol);
    return t - basis * (basis.transpose() * t);
}

HyperplaneMinimum min_quadratic_on_hyperplane(const Matrix& b, const Vector& c,
                                              double tol) {
    if (b.cols() != c.size())
        throw DimensionMismatch("min_quadratic_on_hyperplane: B has " +
                                std::to_string(b.cols()) + " columns, c has " +
                                std::to_string(c.size()) + " entries");
    const double c_norm = c.norm();
    if (c_norm == 0.0) throw ZeroConstraint("constraint vector c is zero");

    const SvdResult dec = svd(b, tol, SvdVectors::full);
    const auto rank = static_cast<Eigen::Index>(dec.numerical_rank);
    const auto p = c.size();

    HyperplaneMinimum out;
    const Matrix null_part = dec.right.rightCols(p - rank);
    const Vector null_coords = null_part.transpose() * c;
    if (null_coords.norm() > tol * c_norm) {
        // Moving along z costs nothing and meets the constraint.
        const Vector z = null_part * null_coords;
        out.value = 0.0;
        out.y = z / null_coords.squaredNorm();
        return out;
    }

    const Matrix range_part = dec.right.leftCols(rank);
    const Vector inv_sq = dec.singular_values.head(rank).array().square().inverse();
    const Vector g_pinv_c = range_part * (inv_sq.asDiagonal() * (range_part.transpose() * c));
    const double q = c.dot(g_pinv_c);
    out.value = 1.0 / q;
    out.y = g_pinv_c / q;
    return out;
}

Matrix hcat(const Matrix& a, const Matrix& b) {
    if (a.cols() == 0) return b;
    if (b.cols() == 0) return a;
    if (a.rows() != b.rows())
        throw DimensionMismatch("hcat: row counts " + std::to_string(a.rows()) +
                                " and " + std::to_string(b.rows()));
    Matrix out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

}  // namespace spanforge
