#pragma once

// Reduction of high-level span programs to low-level ones.
//
// A compiled program lives in a coordinate space split into disjoint named
// blocks: the space V of the high-level program followed by the working
// blocks of every subroutine instance, in emission order. Two subroutines are
// emitted:
//
//   vector loading   turns the fixed-point digits x_{i,a} of a column into
//                    the vector sum_i x_i e_i on its pivots e_i, using
//                    labeled vectors b 2^{-a/2} e_i - f_{i,a} and one free
//                    vector sum 2^{-a/2} f_{i,a} - sum e_i;
//   demultiplexor    a binary tree rooted at an input coordinate g whose
//                    edges f^{(a+1)}_{b 2^a + l} - f^{(a)}_l are labeled by
//                    bit c_a = b, so the available path telescopes to e_c - g.
//                    Used backwards (root in V, leaves elsewhere) it is a
//                    multiplexor.
//
// Dense, column-sparse and row+column-sparse compilers chain these directly.

#include "spanforge/highlevel.hpp"
#include "spanforge/span_program.hpp"

#include <array>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spanforge {

inline constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

struct CoordinateBlock {
    std::string name;
    std::size_t offset = 0;
    std::size_t size = 0;
};

class CoordinateAllocator {
public:
    /// Claims `size` fresh coordinates and returns the first one.
    std::size_t claim(std::string name, std::size_t size);
    std::size_t size() const noexcept { return next_; }
    const std::vector<CoordinateBlock>& blocks() const noexcept { return blocks_; }
    /// Block containing `coord`, or nullptr.
    const CoordinateBlock* find(std::size_t coord) const;

private:
    std::size_t next_ = 0;
    std::vector<CoordinateBlock> blocks_;
};

struct SparseTerm {
    std::size_t coord = 0;
    double value = 0.0;
};
using SparseVector = std::vector<SparseTerm>;

/// Role of one Boolean variable of a compiled program.
struct InputVariable {
    enum class Role { digit, column_index, row_index };
    Role role = Role::digit;
    std::size_t major = 0;  ///< column j (digit, column_index) or row i (row_index)
    std::size_t slot = 0;   ///< row i for dense digits; nonzero slot otherwise
    std::size_t bit = 0;    ///< digit a, or bit position of an integer

    std::string name() const;
};

/// Emitted component that owns a set of input vectors.
struct Component {
    enum class Kind { base, loader, demultiplexor, multiplexor };
    Kind kind = Kind::base;
    std::string name;
    std::size_t record = 0;  ///< index into loaders or trees
};

/// Accumulates variables, vectors and coordinate blocks during compilation.
class ProgramBuilder {
public:
    ProgramBuilder();

    CoordinateAllocator& allocator() noexcept { return alloc_; }
    const CoordinateAllocator& allocator() const noexcept { return alloc_; }

    std::size_t add_variable(InputVariable v);
    std::size_t add_component(Component c);
    std::size_t add_labeled(SparseVector v, std::size_t var, std::uint8_t value,
                            std::size_t owner);
    std::size_t add_free(SparseVector v, std::size_t owner);

    const std::vector<InputVariable>& variables() const noexcept { return vars_; }
    const std::vector<Component>& components() const noexcept { return components_; }
    const std::vector<std::size_t>& free_owner() const noexcept { return free_owner_; }
    const std::vector<std::size_t>& labeled_owner() const noexcept { return labeled_owner_; }
    std::size_t num_free() const noexcept { return free_.size(); }
    std::size_t num_labeled() const noexcept { return labeled_.size(); }

    LowLevelProgram build(const SparseVector& target, double tolerance) const;

private:
    struct Labeled {
        SparseVector vec;
        std::size_t var;
        std::uint8_t value;
    };
    CoordinateAllocator alloc_;
    std::vector<InputVariable> vars_;
    std::vector<Component> components_;
    std::vector<SparseVector> free_;
    std::vector<Labeled> labeled_;
    std::vector<std::size_t> free_owner_;
    std::vector<std::size_t> labeled_owner_;
};

/// One vector-loading instance.
struct LoaderRecord {
    std::size_t component = 0;
    std::size_t column = 0;                            ///< high-level column j
    std::size_t precision = 0;
    std::vector<std::size_t> pivots;                   ///< e_i
    std::vector<std::vector<std::size_t>> work;        ///< f_{i,a}
    std::vector<std::vector<std::size_t>> digit_vars;  ///< x_{i,a}
    /// labeled[i][a][b] = index of v_{i,a,b} in the program's labeled list.
    std::vector<std::vector<std::array<std::size_t, 2>>> labeled;
    std::size_t free_index = 0;
};

/// One demultiplexor (or multiplexor) instance.
struct TreeRecord {
    std::size_t component = 0;
    bool reversed = false;      ///< multiplexor: root in V, leaves in W_j
    std::size_t group = 0;      ///< column j (demux) or row i (mux)
    std::size_t slot = 0;
    std::size_t root = 0;       ///< g
    std::vector<std::size_t> leaves;
    std::vector<std::size_t> bit_vars;              ///< c_0 .. c_{w-1}
    std::vector<std::vector<std::size_t>> nodes;    ///< nodes[a][l] = f^{(a)}_l
    /// edges[a][l][b] = labeled index of v_{a,b,l}, or kAbsent if truncated.
    std::vector<std::vector<std::array<std::size_t, 2>>> edges;
    /// Single-leaf tree (w = 0): the free vector leaf_0 - g.
    std::optional<std::size_t> free_edge;

    std::size_t width() const noexcept { return bit_vars.size(); }
};

/// Emits a vector loader whose digit variables are `digit_vars[i][a]`,
/// a = 0..precision, and claims its n x (precision+1) working block.
LoaderRecord emit_vector_loading(ProgramBuilder& builder,
                                 std::span<const std::size_t> pivots,
                                 const std::vector<std::vector<std::size_t>>& digit_vars,
                                 std::size_t precision, const std::string& name,
                                 std::size_t column = 0);

/// Emits a demultiplexor routing `input_coord` to pivots[c], with c given in
/// binary by `bit_vars` (least significant first). Interior tree levels claim
/// fresh coordinates; branches towards leaves >= pivots.size() are omitted.
TreeRecord emit_demultiplexor(ProgramBuilder& builder,
                              std::span<const std::size_t> pivots,
                              std::size_t input_coord,
                              std::span<const std::size_t> bit_vars,
                              const std::string& name, bool reversed = false);

enum class CompileMode { dense, sparse_cols, sparse };

const char* to_string(CompileMode mode);
CompileMode parse_compile_mode(const std::string& name);

/// Column-sparse description: entry slot i of column j is value[j][i] at row
/// index[j][i].
struct SparseColumns {
    std::size_t rows = 0;
    std::vector<std::vector<std::size_t>> index;
    std::vector<std::vector<double>> value;
};

/// Row lists d_{i,1..l}: column indices covering every nonzero of row i.
struct RowLists {
    std::vector<std::vector<std::size_t>> cols;
};

/// Slots filled with the nonzero rows of each column in increasing order,
/// padded with zero payloads at the smallest unused rows. Throws
/// MalformedInput if a column has more than k_nnz nonzeros.
SparseColumns sparse_columns_from(const Matrix& a, std::size_t k_nnz);
RowLists row_lists_from(const Matrix& a, std::size_t l_nnz);

struct CompiledProgram {
    LowLevelProgram program;
    HighLevelProgram source;
    CompileMode mode = CompileMode::dense;
    std::size_t precision = 0;  ///< k
    std::size_t k_nnz = 0;
    std::size_t l_nnz = 0;
    CoordinateAllocator layout;
    std::vector<InputVariable> variables;
    std::vector<Component> components;
    std::vector<LoaderRecord> loaders;
    std::vector<TreeRecord> trees;
    std::vector<std::size_t> free_owner;
    std::vector<std::size_t> labeled_owner;

    std::size_t rows() const noexcept { return source.space_dim(); }
    std::size_t cols() const noexcept { return source.num_inputs(); }

    /// Boolean assignment for a real matrix: entries are quantized first and,
    /// in sparse modes, the sparse description is derived from the
    /// quantized nonzero pattern.
    Assignment encode(const Matrix& a) const;
    /// Assignment for an explicit sparse description (sparse modes only;
    /// `rows` is required in sparse mode).
    Assignment encode(const SparseColumns& columns, const RowLists* rows = nullptr) const;

    /// The matrix whose high-level evaluation the program reproduces on an
    /// arbitrary assignment. In sparse modes a column whose nonzero mass
    /// cannot be routed (index out of range, or missing from a row list) is
    /// dropped.
    Matrix decode(const Assignment& x) const;
};

CompiledProgram compile_dense(const HighLevelProgram& p, std::size_t precision);
CompiledProgram compile_sparse_cols(const HighLevelProgram& p, std::size_t k_nnz,
                                    std::size_t precision);
CompiledProgram compile_sparse(const HighLevelProgram& p, std::size_t k_nnz,
                               std::size_t l_nnz, std::size_t precision);

/// combined wsize of the compiled program over the encoded family divided by
/// the combined wsize of `p` over the quantized family.
double measure_overhead(const HighLevelProgram& p, const CompiledProgram& compiled,
                        std::span<const Matrix> inputs);

}  // namespace spanforge
