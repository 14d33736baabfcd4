#pragma once

// High-level span programs: input vectors are the columns of a real n x m
// matrix A queried directly. The program decides whether the affine subspace
// t + F meets span(A).

#include "spanforge/linalg.hpp"
#include "spanforge/span_program.hpp"

#include <span>
#include <string>

namespace spanforge {

class HighLevelProgram {
public:
    /// `free_span` may have zero columns; its column span is F and it is
    /// orthonormalized once here.
    HighLevelProgram(Vector target, std::size_t num_inputs, Matrix free_span = {},
                     std::string domain_note = {}, double tolerance = kDefaultTolerance);

    std::size_t space_dim() const noexcept { return static_cast<std::size_t>(target_.size()); }
    std::size_t num_inputs() const noexcept { return num_inputs_; }
    const Vector& target() const noexcept { return target_; }
    /// Orthonormal basis of F.
    const Matrix& free_basis() const noexcept { return free_basis_; }
    const std::string& domain_note() const noexcept { return domain_note_; }
    double tolerance() const noexcept { return tolerance_; }

    /// Throws DimensionMismatch unless `a` is space_dim x num_inputs.
    void check_input(const Matrix& a) const;

private:
    Vector target_;
    std::size_t num_inputs_;
    Matrix free_basis_;
    std::string domain_note_;
    double tolerance_;
};

struct HlWitnessReport {
    bool decision = false;
    Vector witness;  ///< w in R^m (positive) or w' in R^n (negative)
    double size = kNoWitness;
    /// Positive side only: coordinates of t - A w in free_basis().
    Vector free_coefficients;
};

bool evaluate_hl(const HighLevelProgram& p, const Matrix& a);
bool evaluate_hl(const HighLevelProgram& p, const Matrix& a, double tol);

/// min |w|^2 over w with A w in t + F.
HlWitnessReport positive_witness_hl(const HighLevelProgram& p, const Matrix& a);

/// Minimal |w'|^2 over w' orthogonal to span(A) and F with <w', t> = 1, which
/// is u / |u|^2 for u the component of t outside span(A) + F.
HlWitnessReport negative_witness_hl(const HighLevelProgram& p, const Matrix& a);

HlWitnessReport optimal_witness_hl(const HighLevelProgram& p, const Matrix& a);

/// True iff scaling the columns of A by positive `scales` leaves the decision
/// unchanged. Always true for a correct implementation.
bool check_rescale_invariance(const HighLevelProgram& p, const Matrix& a,
                              const Vector& scales);

WitnessSizes wsize_over_family(const HighLevelProgram& p,
                               std::span<const Matrix> family);

}  // namespace spanforge
