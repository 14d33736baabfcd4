#include "spanforge/compile.hpp"

#include "spanforge/encoding.hpp"
#include "spanforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spanforge {

// ---------------------------------------------------------------- allocator

std::size_t CoordinateAllocator::claim(std::string name, std::size_t size) {
    const std::size_t offset = next_;
    blocks_.push_back({std::move(name), offset, size});
    next_ += size;
    return offset;
}

const CoordinateBlock* CoordinateAllocator::find(std::size_t coord) const {
    for (const auto& b : blocks_)
        if (coord >= b.offset && coord < b.offset + b.size) return &b;
    return nullptr;
}

std::string InputVariable::name() const {
    const std::string pos = std::to_string(slot) + "," + std::to_string(major);
    switch (role) {
    case Role::digit:
        return "x[" + pos + "]." + std::to_string(bit);
    case Role::column_index:
        return "c[" + pos + "]." + std::to_string(bit);
    case Role::row_index:
        return "d[" + std::to_string(major) + "," + std::to_string(slot) + "]." +
               std::to_string(bit);
    }
    return {};
}

// ------------------------------------------------------------------ builder

ProgramBuilder::ProgramBuilder() = default;

std::size_t ProgramBuilder::add_variable(InputVariable v) {
    vars_.push_back(v);
    return vars_.size() - 1;
}

std::size_t ProgramBuilder::add_component(Component c) {
    components_.push_back(std::move(c));
    return components_.size() - 1;
}

std::size_t ProgramBuilder::add_labeled(SparseVector v, std::size_t var,
                                        std::uint8_t value, std::size_t owner) {
    labeled_.push_back({std::move(v), var, value});
    labeled_owner_.push_back(owner);
    return labeled_.size() - 1;
}

std::size_t ProgramBuilder::add_free(SparseVector v, std::size_t owner) {
    free_.push_back(std::move(v));
    free_owner_.push_back(owner);
    return free_.size() - 1;
}

namespace {

Vector materialize(const SparseVector& v, std::size_t dim) {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (const auto& term : v) {
        if (term.coord >= dim) throw Error("emitted vector leaves the allocated space");
        out(static_cast<Eigen::Index>(term.coord)) += term.value;
    }
    return out;
}

}  // namespace

LowLevelProgram ProgramBuilder::build(const SparseVector& target, double tolerance) const {
    const std::size_t dim = alloc_.size();
    Matrix free(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(free_.size()));
    for (std::size_t i = 0; i < free_.size(); ++i)
        free.col(static_cast<Eigen::Index>(i)) = materialize(free_[i], dim);
    std::vector<LabeledVector> labeled;
    labeled.reserve(labeled_.size());
    for (const auto& lv : labeled_)
        labeled.push_back({materialize(lv.vec, dim), lv.var, lv.value});
    return LowLevelProgram(materialize(target, dim), vars_.size(), std::move(free),
                           std::move(labeled), tolerance);
}

// -------------------------------------------------------------- subroutines

LoaderRecord emit_vector_loading(ProgramBuilder& builder,
                                 std::span<const std::size_t> pivots,
                                 const std::vector<std::vector<std::size_t>>& digit_vars,
                                 std::size_t precision, const std::string& name,
                                 std::size_t column) {
    const std::size_t n = pivots.size();
    const std::size_t digits = precision + 1;
    if (digit_vars.size() != n)
        throw DimensionMismatch("vector loading: one digit block per pivot expected");
    for (const auto& row : digit_vars)
        if (row.size() != digits)
            throw DimensionMismatch("vector loading: k+1 digit variables per pivot expected");

    LoaderRecord rec;
    rec.component = builder.add_component({Component::Kind::loader, name, 0});
    rec.column = column;
    rec.precision = precision;
    rec.pivots.assign(pivots.begin(), pivots.end());
    rec.digit_vars = digit_vars;
    const std::size_t base = builder.allocator().claim(name + ".work", n * digits);

    SparseVector loader_free;
    rec.work.resize(n);
    rec.labeled.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < digits; ++a) {
            const std::size_t f = base + i * digits + a;
            const double scale = std::pow(2.0, -0.5 * static_cast<double>(a));
            rec.work[i].push_back(f);
            std::array<std::size_t, 2> idx{};
            idx[0] = builder.add_labeled({{f, -1.0}}, digit_vars[i][a], 0, rec.component);
            idx[1] = builder.add_labeled({{pivots[i], scale}, {f, -1.0}}, digit_vars[i][a], 1,
                                         rec.component);
            rec.labeled[i].push_back(idx);
            loader_free.push_back({f, scale});
        }
    }
    for (std::size_t i = 0; i < n; ++i) loader_free.push_back({pivots[i], -1.0});
    rec.free_index = builder.add_free(std::move(loader_free), rec.component);
    return rec;
}

TreeRecord emit_demultiplexor(ProgramBuilder& builder,
                              std::span<const std::size_t> pivots,
                              std::size_t input_coord,
                              std::span<const std::size_t> bit_vars,
                              const std::string& name, bool reversed) {
    const std::size_t n = pivots.size();
    const std::size_t w = bit_vars.size();
    if (n == 0) throw DimensionMismatch("demultiplexor needs at least one pivot");
    if (w != bit_width_for(n))
        throw DimensionMismatch("demultiplexor: expected ceil(log2 n) bit variables");

    TreeRecord rec;
    rec.component = builder.add_component(
        {reversed ? Component::Kind::multiplexor : Component::Kind::demultiplexor, name, 0});
    rec.reversed = reversed;
    rec.root = input_coord;
    rec.leaves.assign(pivots.begin(), pivots.end());
    rec.bit_vars.assign(bit_vars.begin(), bit_vars.end());

    if (w == 0) {
        rec.nodes = {{input_coord}};
        rec.free_edge = builder.add_free({{pivots[0], 1.0}, {input_coord, -1.0}}, rec.component);
        return rec;
    }

    rec.nodes.resize(w + 1);
    rec.nodes[0] = {input_coord};
    for (std::size_t a = 1; a < w; ++a) {
        const std::size_t width = std::size_t{1} << a;
        const std::size_t base =
            builder.allocator().claim(name + ".level" + std::to_string(a), width);
        for (std::size_t l = 0; l < width; ++l) rec.nodes[a].push_back(base + l);
    }
    rec.nodes[w] = rec.leaves;

    rec.edges.resize(w);
    for (std::size_t a = 0; a < w; ++a) {
        const std::size_t width = std::size_t{1} << a;
        rec.edges[a].resize(width);
        for (std::size_t l = 0; l < width; ++l) {
            for (std::uint8_t b = 0; b < 2; ++b) {
                const std::size_t child = b * width + l;
                if (a + 1 == w && child >= n) {
                    rec.edges[a][l][b] = kAbsent;
                    continue;
                }
                rec.edges[a][l][b] = builder.add_labeled(
                    {{rec.nodes[a + 1][child], 1.0}, {rec.nodes[a][l], -1.0}}, bit_vars[a], b,
                    rec.component);
            }
        }
    }
    return rec;
}

// ------------------------------------------------------------ sparse input

const char* to_string(CompileMode mode) {
    switch (mode) {
    case CompileMode::dense: return "dense";
    case CompileMode::sparse_cols: return "sparse_cols";
    case CompileMode::sparse: return "sparse";
    }
    return "?";
}

CompileMode parse_compile_mode(const std::string& name) {
    if (name == "dense") return CompileMode::dense;
    if (name == "sparse_cols") return CompileMode::sparse_cols;
    if (name == "sparse") return CompileMode::sparse;
    throw MalformedInput("mode", "expected dense, sparse_cols or sparse, got '" + name + "'");
}

SparseColumns sparse_columns_from(const Matrix& a, std::size_t k_nnz) {
    const auto n = static_cast<std::size_t>(a.rows());
    if (k_nnz > n) throw MalformedInput("k_nnz", "must not exceed the number of rows");
    SparseColumns out;
    out.rows = n;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        std::vector<std::size_t> idx;
        std::vector<double> val;
        std::vector<bool> used(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (a(static_cast<Eigen::Index>(i), j) == 0.0) continue;
            if (idx.size() == k_nnz)
                throw MalformedInput("input", "column " + std::to_string(j) +
                                                  " has more than k_nnz nonzeros");
            idx.push_back(i);
            val.push_back(a(static_cast<Eigen::Index>(i), j));
            used[i] = true;
        }
        for (std::size_t i = 0; idx.size() < k_nnz; ++i) {
            if (used[i]) continue;
            idx.push_back(i);
            val.push_back(0.0);
        }
        out.index.push_back(std::move(idx));
        out.value.push_back(std::move(val));
    }
    return out;
}

RowLists row_lists_from(const Matrix& a, std::size_t l_nnz) {
    const auto m = static_cast<std::size_t>(a.cols());
    if (l_nnz > m) throw MalformedInput("l_nnz", "must not exceed the number of columns");
    RowLists out;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        std::vector<std::size_t> cols;
        std::vector<bool> used(m, false);
        for (std::size_t j = 0; j < m; ++j) {
            if (a(i, static_cast<Eigen::Index>(j)) == 0.0) continue;
            if (cols.size() == l_nnz)
                throw MalformedInput("input", "row " + std::to_string(i) +
                                                  " has more than l_nnz nonzeros");
            cols.push_back(j);
            used[j] = true;
        }
        for (std::size_t j = 0; cols.size() < l_nnz; ++j)
            if (!used[j]) cols.push_back(j);
        out.cols.push_back(std::move(cols));
    }
    return out;
}

// ------------------------------------------------------------- compilation

namespace {

struct Layout {
    std::size_t n, m, k, k_nnz, l_nnz, wn, wm;

    std::size_t digits() const { return k + 1; }
    std::size_t dense_var(std::size_t i, std::size_t j, std::size_t a) const {
        return (j * n + i) * digits() + a;
    }
    std::size_t slot_base(std::size_t j, std::size_t s) const {
        return (j * k_nnz + s) * (digits() + wn);
    }
    std::size_t digit_var(std::size_t j, std::size_t s, std::size_t a) const {
        return slot_base(j, s) + a;
    }
    std::size_t index_var(std::size_t j, std::size_t s, std::size_t b) const {
        return slot_base(j, s) + digits() + b;
    }
    std::size_t row_var(std::size_t i, std::size_t s, std::size_t b) const {
        return m * k_nnz * (digits() + wn) + (i * l_nnz + s) * wm + b;
    }
};

Layout layout_of(const CompiledProgram& c) {
    return {c.rows(),  c.cols(), c.precision, c.k_nnz, c.l_nnz,
            bit_width_for(c.rows()), bit_width_for(c.cols())};
}

std::vector<std::size_t> embed_space(ProgramBuilder& builder, const HighLevelProgram& p) {
    const std::size_t n = p.space_dim();
    const std::size_t v = builder.allocator().claim("V", n);
    std::vector<std::size_t> coords(n);
    for (std::size_t i = 0; i < n; ++i) coords[i] = v + i;
    const std::size_t base = builder.add_component({Component::Kind::base, "P", 0});
    const Matrix& f = p.free_basis();
    for (Eigen::Index c = 0; c < f.cols(); ++c) {
        SparseVector vec;
        for (std::size_t i = 0; i < n; ++i)
            if (f(static_cast<Eigen::Index>(i), c) != 0.0)
                vec.push_back({coords[i], f(static_cast<Eigen::Index>(i), c)});
        builder.add_free(std::move(vec), base);
    }
    return coords;
}

SparseVector target_of(const HighLevelProgram& p, const std::vector<std::size_t>& coords) {
    SparseVector t;
    for (std::size_t i = 0; i < coords.size(); ++i)
        if (p.target()(static_cast<Eigen::Index>(i)) != 0.0)
            t.push_back({coords[i], p.target()(static_cast<Eigen::Index>(i))});
    return t;
}

CompiledProgram finish(ProgramBuilder& builder, const HighLevelProgram& p,
                       const std::vector<std::size_t>& v, CompileMode mode,
                       std::size_t precision, std::size_t k_nnz, std::size_t l_nnz,
                       std::vector<LoaderRecord> loaders, std::vector<TreeRecord> trees) {
    auto components = builder.components();
    for (std::size_t i = 0; i < loaders.size(); ++i) components[loaders[i].component].record = i;
    for (std::size_t i = 0; i < trees.size(); ++i) components[trees[i].component].record = i;
    return CompiledProgram{builder.build(target_of(p, v), p.tolerance()),
                           p,
                           mode,
                           precision,
                           k_nnz,
                           l_nnz,
                           builder.allocator(),
                           builder.variables(),
                           std::move(components),
                           std::move(loaders),
                           std::move(trees),
                           builder.free_owner(),
                           builder.labeled_owner()};
}

void check_precision(std::size_t k) {
    if (k > 52) throw MalformedInput("bits", "precision must be at most 52");
}

// Column-slot variables for the sparse modes: per column j and slot s, the
// k+1 digits of x_{s,j} followed by the bits of c_{s,j}.
void add_slot_variables(ProgramBuilder& builder, const Layout& l) {
    for (std::size_t j = 0; j < l.m; ++j)
        for (std::size_t s = 0; s < l.k_nnz; ++s) {
            for (std::size_t a = 0; a < l.digits(); ++a)
                builder.add_variable({InputVariable::Role::digit, j, s, a});
            for (std::size_t b = 0; b < l.wn; ++b)
                builder.add_variable({InputVariable::Role::column_index, j, s, b});
        }
}

// Loader into U_j followed by the demultiplexors routing each slot of U_j.
void emit_sparse_column(ProgramBuilder& builder, const Layout& l, std::size_t j,
                        std::span<const std::size_t> destinations,
                        std::vector<LoaderRecord>& loaders, std::vector<TreeRecord>& trees) {
    const std::string col = std::to_string(j);
    const std::size_t u = builder.allocator().claim("U" + col, l.k_nnz);
    std::vector<std::size_t> slots(l.k_nnz);
    std::vector<std::vector<std::size_t>> digit_vars(l.k_nnz);
    for (std::size_t s = 0; s < l.k_nnz; ++s) {
        slots[s] = u + s;
        for (std::size_t a = 0; a < l.digits(); ++a) digit_vars[s].push_back(l.digit_var(j, s, a));
    }
    loaders.push_back(emit_vector_loading(builder, slots, digit_vars, l.k, "L" + col, j));
    for (std::size_t s = 0; s < l.k_nnz; ++s) {
        std::vector<std::size_t> bits;
        for (std::size_t b = 0; b < l.wn; ++b) bits.push_back(l.index_var(j, s, b));
        auto rec = emit_demultiplexor(builder, destinations, slots[s], bits,
                                      "D" + std::to_string(s) + "," + col);
        rec.group = j;
        rec.slot = s;
        trees.push_back(std::move(rec));
    }
}

}  // namespace

CompiledProgram compile_dense(const HighLevelProgram& p, std::size_t precision) {
    check_precision(precision);
    ProgramBuilder builder;
    const Layout l{p.space_dim(), p.num_inputs(), precision, 0, 0, 0, 0};
    for (std::size_t j = 0; j < l.m; ++j)
        for (std::size_t i = 0; i < l.n; ++i)
            for (std::size_t a = 0; a < l.digits(); ++a)
                builder.add_variable({InputVariable::Role::digit, j, i, a});
    const auto v = embed_space(builder, p);
    std::vector<LoaderRecord> loaders;
    for (std::size_t j = 0; j < l.m; ++j) {
        std::vector<std::vector<std::size_t>> digit_vars(l.n);
        for (std::size_t i = 0; i < l.n; ++i)
            for (std::size_t a = 0; a < l.digits(); ++a)
                digit_vars[i].push_back(l.dense_var(i, j, a));
        loaders.push_back(
            emit_vector_loading(builder, v, digit_vars, precision, "L" + std::to_string(j), j));
    }
    return finish(builder, p, v, CompileMode::dense, precision, 0, 0, std::move(loaders), {});
}

CompiledProgram compile_sparse_cols(const HighLevelProgram& p, std::size_t k_nnz,
                                    std::size_t precision) {
    check_precision(precision);
    const std::size_t n = p.space_dim();
    if (k_nnz == 0 || k_nnz > n)
        throw MalformedInput("k_nnz", "must lie in [1, " + std::to_string(n) + "]");
    ProgramBuilder builder;
    const Layout l{n, p.num_inputs(), precision, k_nnz, 0, bit_width_for(n), 0};
    add_slot_variables(builder, l);
    const auto v = embed_space(builder, p);
    std::vector<LoaderRecord> loaders;
    std::vector<TreeRecord> trees;
    for (std::size_t j = 0; j < l.m; ++j) emit_sparse_column(builder, l, j, v, loaders, trees);
    return finish(builder, p, v, CompileMode::sparse_cols, precision, k_nnz, 0,
                  std::move(loaders), std::move(trees));
}

CompiledProgram compile_sparse(const HighLevelProgram& p, std::size_t k_nnz,
                               std::size_t l_nnz, std::size_t precision) {
    check_precision(precision);
    const std::size_t n = p.space_dim();
    const std::size_t m = p.num_inputs();
    if (k_nnz == 0 || k_nnz > n)
        throw MalformedInput("k_nnz", "must lie in [1, " + std::to_string(n) + "]");
    if (l_nnz == 0 || l_nnz > m)
        throw MalformedInput("l_nnz", "must lie in [1, " + std::to_string(m) + "]");
    ProgramBuilder builder;
    const Layout l{n, m, precision, k_nnz, l_nnz, bit_width_for(n), bit_width_for(m)};
    add_slot_variables(builder, l);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s = 0; s < l_nnz; ++s)
            for (std::size_t b = 0; b < l.wm; ++b)
                builder.add_variable({InputVariable::Role::row_index, i, s, b});
    const auto v = embed_space(builder, p);

    std::vector<LoaderRecord> loaders;
    std::vector<TreeRecord> trees;
    std::vector<std::size_t> w_base(m);
    for (std::size_t j = 0; j < m; ++j) {
        w_base[j] = builder.allocator().claim("W" + std::to_string(j), n);
        std::vector<std::size_t> h(n);
        for (std::size_t i = 0; i < n; ++i) h[i] = w_base[j] + i;
        emit_sparse_column(builder, l, j, h, loaders, trees);
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> h(m);
        for (std::size_t j = 0; j < m; ++j) h[j] = w_base[j] + i;
        for (std::size_t s = 0; s < l_nnz; ++s) {
            std::vector<std::size_t> bits;
            for (std::size_t b = 0; b < l.wm; ++b) bits.push_back(l.row_var(i, s, b));
            auto rec = emit_demultiplexor(builder, h, v[i], bits,
                                          "M" + std::to_string(i) + "," + std::to_string(s),
                                          true);
            rec.group = i;
            rec.slot = s;
            trees.push_back(std::move(rec));
        }
    }
    return finish(builder, p, v, CompileMode::sparse, precision, k_nnz, l_nnz,
                  std::move(loaders), std::move(trees));
}

// --------------------------------------------------------- encode / decode

namespace {

void put_real(Assignment& x, double value, std::size_t k, std::size_t first) {
    const auto code = encode_real(value, k);
    for (std::size_t a = 0; a <= k; ++a) x[first + a] = code.bits[a];
}

void put_int(Assignment& x, std::size_t value, std::size_t n, std::size_t first) {
    const auto code = encode_int(value, n);
    for (std::size_t b = 0; b < code.width; ++b) x[first + b] = code.bits[b];
}

double read_real(const Assignment& x, std::size_t k, std::size_t first) {
    FixedPointCode code{k, {}};
    code.bits.assign(x.begin() + static_cast<std::ptrdiff_t>(first),
                     x.begin() + static_cast<std::ptrdiff_t>(first + k + 1));
    return decode_real(code);
}

std::size_t read_int(const Assignment& x, std::size_t width, std::size_t first) {
    IntegerCode code{width, {}};
    code.bits.assign(x.begin() + static_cast<std::ptrdiff_t>(first),
                     x.begin() + static_cast<std::ptrdiff_t>(first + width));
    return decode_int(code);
}

}  // namespace

Assignment CompiledProgram::encode(const Matrix& a) const {
    source.check_input(a);
    const Matrix q = quantize(a, precision);
    if (mode == CompileMode::dense) {
        const Layout l = layout_of(*this);
        Assignment x(program.num_vars(), 0);
        for (std::size_t j = 0; j < l.m; ++j)
            for (std::size_t i = 0; i < l.n; ++i)
                put_real(x, q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                         precision, l.dense_var(i, j, 0));
        return x;
    }
    const auto columns = sparse_columns_from(q, k_nnz);
    if (mode == CompileMode::sparse_cols) return encode(columns);
    const auto rows = row_lists_from(q, l_nnz);
    return encode(columns, &rows);
}

Assignment CompiledProgram::encode(const SparseColumns& columns, const RowLists* rows) const {
    if (mode == CompileMode::dense)
        throw MalformedInput("mode", "dense programs take a matrix, not a sparse description");
    const Layout l = layout_of(*this);
    if (columns.index.size() != l.m || columns.value.size() != l.m)
        throw MalformedInput("columns", "expected " + std::to_string(l.m) + " columns");

    Matrix dense = Matrix::Zero(static_cast<Eigen::Index>(l.n), static_cast<Eigen::Index>(l.m));
    Assignment x(program.num_vars(), 0);
    for (std::size_t j = 0; j < l.m; ++j) {
        const std::string field = "columns[" + std::to_string(j) + "]";
        if (columns.index[j].size() != l.k_nnz || columns.value[j].size() != l.k_nnz)
            throw MalformedInput(field, "expected " + std::to_string(l.k_nnz) + " slots");
        std::vector<bool> seen(l.n, false);
        for (std::size_t s = 0; s < l.k_nnz; ++s) {
            const std::size_t c = columns.index[j][s];
            if (c >= l.n) throw MalformedInput(field, "row index out of range");
            if (seen[c]) throw MalformedInput(field, "duplicate row index " + std::to_string(c));
            seen[c] = true;
            const double v = quantize(columns.value[j][s], precision);
            dense(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = v;
            put_real(x, v, precision, l.digit_var(j, s, 0));
            put_int(x, c, l.n, l.index_var(j, s, 0));
        }
    }
    if (mode == CompileMode::sparse_cols) return x;

    if (rows == nullptr) throw MalformedInput("rows", "row lists are required in sparse mode");
    if (rows->cols.size() != l.n)
        throw MalformedInput("rows", "expected " + std::to_string(l.n) + " row lists");
    for (std::size_t i = 0; i < l.n; ++i) {
        const std::string field = "rows[" + std::to_string(i) + "]";
        if (rows->cols[i].size() != l.l_nnz)
            throw MalformedInput(field, "expected " + std::to_string(l.l_nnz) + " entries");
        std::vector<bool> listed(l.m, false);
        for (std::size_t s = 0; s < l.l_nnz; ++s) {
            const std::size_t d = rows->cols[i][s];
            if (d >= l.m) throw MalformedInput(field, "column index out of range");
            if (listed[d]) throw MalformedInput(field, "duplicate column index " + std::to_string(d));
            listed[d] = true;
            put_int(x, d, l.m, l.row_var(i, s, 0));
        }
        for (std::size_t j = 0; j < l.m; ++j)
            if (dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0.0 &&
                !listed[j])
                throw MalformedInput(field, "nonzero in column " + std::to_string(j) +
                                                " is not listed");
    }
    return x;
}

Matrix CompiledProgram::decode(const Assignment& x) const {
    if (x.size() != program.num_vars())
        throw DimensionMismatch("assignment length differs from the number of variables");
    const Layout l = layout_of(*this);
    const auto n = static_cast<Eigen::Index>(l.n);
    Matrix out = Matrix::Zero(n, static_cast<Eigen::Index>(l.m));
    if (mode == CompileMode::dense) {
        for (std::size_t j = 0; j < l.m; ++j)
            for (std::size_t i = 0; i < l.n; ++i)
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    read_real(x, precision, l.dense_var(i, j, 0));
        return out;
    }
    for (std::size_t j = 0; j < l.m; ++j) {
        Vector col = Vector::Zero(n);
        bool routable = true;
        for (std::size_t s = 0; s < l.k_nnz; ++s) {
            const double v = read_real(x, precision, l.digit_var(j, s, 0));
            const std::size_t c = read_int(x, l.wn, l.index_var(j, s, 0));
            if (c < l.n)
                col(static_cast<Eigen::Index>(c)) += v;
            else if (v != 0.0)
                routable = false;
        }
        if (mode == CompileMode::sparse) {
            for (std::size_t i = 0; i < l.n && routable; ++i) {
                if (col(static_cast<Eigen::Index>(i)) == 0.0) continue;
                bool listed = false;
                for (std::size_t s = 0; s < l.l_nnz; ++s)
                    listed = listed || read_int(x, l.wm, l.row_var(i, s, 0)) == j;
                routable = listed;
            }
        }
        if (routable) out.col(static_cast<Eigen::Index>(j)) = col;
    }
    return out;
}

double measure_overhead(const HighLevelProgram& p, const CompiledProgram& compiled,
                        std::span<const Matrix> inputs) {
    std::vector<Matrix> quantized;
    std::vector<Assignment> encoded;
    for (const auto& a : inputs) {
        quantized.push_back(quantize(a, compiled.precision));
        encoded.push_back(compiled.encode(a));
    }
    const auto hl = wsize_over_family(p, quantized);
    if (!(hl.combined > 0.0))
        throw Error("overhead is undefined: the family needs inputs of both values "
                    "with nonzero witness sizes");
    return wsize_over_domain(compiled.program, encoded).combined / hl.combined;
}

}  // namespace spanforge
