#pragma once

// Low-level span programs over Boolean inputs: a target vector, free input
// vectors, and input vectors labeled by (variable, value). The program
// evaluates to 1 on x iff the target lies in the span of the vectors made
// available by x.

#include "spanforge/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace spanforge {

/// One bit per input variable, each 0 or 1. Variable indices are 0-based.
using Assignment = std::vector<std::uint8_t>;

/// Parses "101" into {1, 0, 1}. Throws MalformedInput on other characters.
Assignment parse_assignment(std::string_view bits);
std::string format_assignment(const Assignment& x);

/// All 2^num_vars assignments, in increasing binary order with variable 0 as
/// the most significant position of the string form.
std::vector<Assignment> all_assignments(std::size_t num_vars);

inline constexpr double kNoWitness = std::numeric_limits<double>::infinity();

struct LabeledVector {
    Vector vec;
    std::size_t var = 0;
    std::uint8_t value = 0;
};

class LowLevelProgram {
public:
    LowLevelProgram(Vector target, std::size_t num_vars, Matrix free_vectors,
                    std::vector<LabeledVector> labeled,
                    double tolerance = kDefaultTolerance);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(target_.size()); }
    std::size_t num_vars() const noexcept { return num_vars_; }
    const Vector& target() const noexcept { return target_; }
    /// Free vectors as columns (dim x #free).
    const Matrix& free_vectors() const noexcept { return free_; }
    const std::vector<LabeledVector>& labeled() const noexcept { return labeled_; }
    double tolerance() const noexcept { return tolerance_; }

    /// Every input vector as a column: free vectors first, then labeled ones
    /// in declaration order.
    Matrix all_vectors() const;

private:
    Vector target_;
    std::size_t num_vars_;
    Matrix free_;
    std::vector<LabeledVector> labeled_;
    double tolerance_;
};

struct ColumnSource {
    enum class Kind { free, labeled };
    Kind kind = Kind::free;
    std::size_t index = 0;  ///< column of free_vectors() or entry of labeled()

    friend bool operator==(const ColumnSource&, const ColumnSource&) = default;
};

/// The matrix A(x) of available vectors plus the provenance of each column.
struct AvailableSet {
    Matrix columns;
    std::vector<ColumnSource> sources;
    std::vector<std::size_t> false_labeled;  ///< labeled() indices not available
};

AvailableSet available_vectors(const LowLevelProgram& p, const Assignment& x);

bool evaluate(const LowLevelProgram& p, const Assignment& x);
bool evaluate(const LowLevelProgram& p, const Assignment& x, double tol);

/// Optimal witness for one side. For a positive report `witness` holds the
/// coefficients over the available columns (ordered like `sources`); for a
/// negative report it is the separating vector w' in the program's space.
struct WitnessReport {
    bool decision = false;
    Vector witness;
    double size = kNoWitness;
    std::vector<ColumnSource> sources;
};

/// min |w|^2 subject to A(x) w = t. Throws NoPositiveWitness on 0-inputs.
WitnessReport positive_witness(const LowLevelProgram& p, const Assignment& x);

/// min |A^T w'|^2 over w' orthogonal to A(x) with <w', t> = 1, where A holds
/// every input vector. Throws NoNegativeWitness on 1-inputs.
WitnessReport negative_witness(const LowLevelProgram& p, const Assignment& x);

/// Whichever side exists.
WitnessReport optimal_witness(const LowLevelProgram& p, const Assignment& x);

struct WitnessSizes {
    double w0 = 0.0;
    double w1 = 0.0;
    double combined = 0.0;  ///< sqrt(w0 * w1)
};

/// Maximum positive and negative witness sizes over `domain` and their
/// geometric mean. A side with no inputs contributes 0.
WitnessSizes wsize_over_domain(const LowLevelProgram& p,
                               std::span<const Assignment> domain);

}  // namespace spanforge
