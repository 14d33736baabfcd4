#include "spanforge/highlevel.hpp"

#include "spanforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace spanforge {

HighLevelProgram::HighLevelProgram(Vector target, std::size_t num_inputs,
                                   Matrix free_span, std::string domain_note,
                                   double tolerance)
    : target_(std::move(target)),
      num_inputs_(num_inputs),
      domain_note_(std::move(domain_note)),
      tolerance_(tolerance) {
    const auto n = target_.size();
    if (n == 0 || target_.isZero(0.0))
        throw MalformedInput("target", "target vector must be nonzero");
    if (!target_.allFinite()) throw MalformedInput("target", "non-finite entry");
    if (!(tolerance_ > 0.0)) throw MalformedInput("tol", "tolerance must be positive");
    if (free_span.cols() == 0) {
        free_basis_.resize(n, 0);
    } else {
        if (free_span.rows() != n)
            throw MalformedInput("free_basis", "free vectors must have length " +
                                                   std::to_string(n));
        if (!free_span.allFinite()) throw MalformedInput("free_basis", "non-finite entry");
        free_basis_ = column_space_basis(free_span, tolerance_);
    }
}

void HighLevelProgram::check_input(const Matrix& a) const {
    if (a.rows() != target_.size() || a.cols() != static_cast<Eigen::Index>(num_inputs_))
        throw DimensionMismatch("input matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", program expects " +
                                std::to_string(target_.size()) + "x" +
                                std::to_string(num_inputs_));
}

namespace {

Vector outside_part(const HighLevelProgram& p, const Matrix& a, double tol) {
    p.check_input(a);
    return project_complement(hcat(a, p.free_basis()), p.target(), tol);
}

}  // namespace

bool evaluate_hl(const HighLevelProgram& p, const Matrix& a) {
    return evaluate_hl(p, a, p.tolerance());
}

bool evaluate_hl(const HighLevelProgram& p, const Matrix& a, double tol) {
    return outside_part(p, a, tol).norm() <= tol * p.target().norm();
}

HlWitnessReport positive_witness_hl(const HighLevelProgram& p, const Matrix& a) {
    if (!evaluate_hl(p, a)) throw NoPositiveWitness("t + F does not meet span(A)");

    const Matrix& f = p.free_basis();
    const auto n = static_cast<Eigen::Index>(p.space_dim());
    const Matrix q = Matrix::Identity(n, n) - f * f.transpose();

    HlWitnessReport out;
    out.decision = true;
    out.witness = min_norm_solve(q * a, q * p.target(), p.tolerance());
    out.size = out.witness.squaredNorm();
    out.free_coefficients = f.transpose() * (p.target() - a * out.witness);
    return out;
}

HlWitnessReport negative_witness_hl(const HighLevelProgram& p, const Matrix& a) {
    const Vector u = outside_part(p, a, p.tolerance());
    const double u2 = u.squaredNorm();
    if (std::sqrt(u2) <= p.tolerance() * p.target().norm())
        throw NoNegativeWitness("t + F meets span(A)");

    HlWitnessReport out;
    out.decision = false;
    out.witness = u / u2;
    out.size = 1.0 / u2;
    return out;
}

HlWitnessReport optimal_witness_hl(const HighLevelProgram& p, const Matrix& a) {
    return evaluate_hl(p, a) ? positive_witness_hl(p, a) : negative_witness_hl(p, a);
}

bool check_rescale_invariance(const HighLevelProgram& p, const Matrix& a,
                              const Vector& scales) {
    p.check_input(a);
    if (scales.size() != a.cols())
        throw DimensionMismatch("need one scale per input column");
    if ((scales.array() <= 0.0).any())
        throw MalformedInput("scales", "scales must be strictly positive");
    const Matrix scaled = a * scales.asDiagonal();
    return evaluate_hl(p, scaled) == evaluate_hl(p, a);
}

WitnessSizes wsize_over_family(const HighLevelProgram& p,
                               std::span<const Matrix> family) {
    if (family.empty()) throw MalformedInput("family", "input family must be nonempty");
    WitnessSizes out;
    for (const auto& a : family) {
        const HlWitnessReport r = optimal_witness_hl(p, a);
        if (r.decision)
            out.w1 = std::max(out.w1, r.size);
        else
            out.w0 = std::max(out.w0, r.size);
    }
    out.combined = std::sqrt(out.w0 * out.w1);
    return out;
}

}  // namespace spanforge
