#pragma once

// Explicit witnesses for compiled programs, assembled from a high-level
// witness by the constructions that prove the subroutine bounds. Each
// component reports what it contributes to the total size and the bound it
// is expected to respect, so the bounds can be checked one subroutine at a
// time.
//
// Positive side: loader L_j carries w_j (coefficient w_j 2^{-a/2} on the
// available digit vector, w_j on its free vector); a demultiplexor carries
// w_j x_{i,j} along its available path; a multiplexor carries the mass of the
// entry it routes back into V.
//
// Negative side: w' on V is extended to every working coordinate so that it
// stays orthogonal to all available vectors.

#include "spanforge/compile.hpp"

#include <vector>

namespace spanforge {

struct ComponentCost {
    std::size_t component = 0;
    double labeled_cost = 0.0;  ///< sum of squares over the component's labeled vectors
    double free_cost = 0.0;     ///< sum of squares over its free vectors (positive side)
    double bound = 0.0;         ///< claimed upper bound on labeled_cost
};

struct TransferredWitness {
    /// Positive: coefficients over available_vectors(program, x) in source order.
    /// Negative: the extended vector in the compiled space.
    Vector witness;
    double size = 0.0;          ///< sum of labeled_cost + free_cost over components
    std::vector<ComponentCost> costs;
    /// Positive: |A(x) w - t|. Negative: max of |<w, t> - 1| and
    /// |<w, v>| over available vectors v.
    double residual = 0.0;
};

/// `hl` must be a positive high-level witness for compiled.decode(x).
TransferredWitness transfer_positive_witness(const CompiledProgram& compiled,
                                             const Assignment& x,
                                             const HlWitnessReport& hl);

/// `hl` must be a negative high-level witness for compiled.decode(x).
TransferredWitness transfer_negative_witness(const CompiledProgram& compiled,
                                             const Assignment& x,
                                             const HlWitnessReport& hl);

}  // namespace spanforge
