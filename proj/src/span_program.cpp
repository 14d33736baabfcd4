#include "spanforge/span_program.hpp"

#include "spanforge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace spanforge {

Assignment parse_assignment(std::string_view bits) {
    Assignment x;
    x.reserve(bits.size());
    for (char ch : bits) {
        if (ch != '0' && ch != '1')
            throw MalformedInput("input", "expected a string of 0/1 characters, got '" +
                                              std::string(bits) + "'");
        x.push_back(static_cast<std::uint8_t>(ch - '0'));
    }
    return x;
}

std::string format_assignment(const Assignment& x) {
    std::string s;
    s.reserve(x.size());
    for (auto b : x) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<Assignment> all_assignments(std::size_t num_vars) {
    if (num_vars >= 8 * sizeof(std::size_t))
        throw MalformedInput("num_vars", "too many variables to enumerate");
    const std::size_t count = std::size_t{1} << num_vars;
    std::vector<Assignment> out;
    out.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        Assignment x(num_vars);
        for (std::size_t j = 0; j < num_vars; ++j)
            x[j] = static_cast<std::uint8_t>((code >> (num_vars - 1 - j)) & 1U);
        out.push_back(std::move(x));
    }
    return out;
}

LowLevelProgram::LowLevelProgram(Vector target, std::size_t num_vars,
                                 Matrix free_vectors,
                                 std::vector<LabeledVector> labeled,
                                 double tolerance)
    : target_(std::move(target)),
      num_vars_(num_vars),
      free_(std::move(free_vectors)),
      labeled_(std::move(labeled)),
      tolerance_(tolerance) {
    const auto dim = target_.size();
    if (dim == 0 || target_.isZero(0.0))
        throw MalformedInput("target", "target vector must be nonzero");
    if (!target_.allFinite()) throw MalformedInput("target", "non-finite entry");
    if (free_.cols() == 0)
        free_.resize(dim, 0);
    else if (free_.rows() != dim)
        throw MalformedInput("free", "free vectors must have length " + std::to_string(dim));
    if (!free_.allFinite()) throw MalformedInput("free", "non-finite entry");
    for (std::size_t i = 0; i < labeled_.size(); ++i) {
        const auto& lv = labeled_[i];
        const std::string field = "labeled[" + std::to_string(i) + "]";
        if (lv.vec.size() != dim)
            throw MalformedInput(field + ".vec", "length must be " + std::to_string(dim));
        if (!lv.vec.allFinite()) throw MalformedInput(field + ".vec", "non-finite entry");
        if (lv.var >= num_vars_)
            throw MalformedInput(field + ".var", "variable index out of range");
        if (lv.value > 1) throw MalformedInput(field + ".val", "value must be 0 or 1");
    }
    if (!(tolerance_ > 0.0)) throw MalformedInput("tol", "tolerance must be positive");
}

Matrix LowLevelProgram::all_vectors() const {
    Matrix out(target_.size(), free_.cols() + static_cast<Eigen::Index>(labeled_.size()));
    out.leftCols(free_.cols()) = free_;
    for (std::size_t i = 0; i < labeled_.size(); ++i)
        out.col(free_.cols() + static_cast<Eigen::Index>(i)) = labeled_[i].vec;
    return out;
}

namespace {

void check_assignment(const LowLevelProgram& p, const Assignment& x) {
    if (x.size() != p.num_vars())
        throw DimensionMismatch("assignment has " + std::to_string(x.size()) +
                                " bits, program has " + std::to_string(p.num_vars()) +
                                " variables");
    for (auto b : x)
        if (b > 1) throw MalformedInput("input", "bits must be 0 or 1");
}

Matrix false_vectors(const LowLevelProgram& p, const AvailableSet& avail) {
    Matrix out(p.dim(), static_cast<Eigen::Index>(avail.false_labeled.size()));
    for (std::size_t i = 0; i < avail.false_labeled.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = p.labeled()[avail.false_labeled[i]].vec;
    return out;
}

}  // namespace

AvailableSet available_vectors(const LowLevelProgram& p, const Assignment& x) {
    check_assignment(p, x);
    AvailableSet out;
    std::size_t count = static_cast<std::size_t>(p.free_vectors().cols());
    for (const auto& lv : p.labeled())
        if (x[lv.var] == lv.value) ++count;

    out.columns.resize(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(count));
    out.sources.reserve(count);
    Eigen::Index col = 0;
    for (Eigen::Index i = 0; i < p.free_vectors().cols(); ++i) {
        out.columns.col(col++) = p.free_vectors().col(i);
        out.sources.push_back({ColumnSource::Kind::free, static_cast<std::size_t>(i)});
    }
    for (std::size_t i = 0; i < p.labeled().size(); ++i) {
        const auto& lv = p.labeled()[i];
        if (x[lv.var] == lv.value) {
            out.columns.col(col++) = lv.vec;
            out.sources.push_back({ColumnSource::Kind::labeled, i});
        } else {
            out.false_labeled.push_back(i);
        }
    }
    return out;
}

bool evaluate(const LowLevelProgram& p, const Assignment& x) {
    return evaluate(p, x, p.tolerance());
}

bool evaluate(const LowLevelProgram& p, const Assignment& x, double tol) {
    const AvailableSet avail = available_vectors(p, x);
    return project_complement(avail.columns, p.target(), tol).norm() <=
           tol * p.target().norm();
}

WitnessReport positive_witness(const LowLevelProgram& p, const Assignment& x) {
    const AvailableSet avail = available_vectors(p, x);
    const double tol = p.tolerance();
    if (project_complement(avail.columns, p.target(), tol).norm() > tol * p.target().norm())
        throw NoPositiveWitness("input " + format_assignment(x) + " evaluates to 0");

    WitnessReport out;
    out.decision = true;
    out.witness = min_norm_solve(avail.columns, p.target(), tol);
    out.size = out.witness.squaredNorm();
    out.sources = avail.sources;
    return out;
}

WitnessReport negative_witness(const LowLevelProgram& p, const Assignment& x) {
    const AvailableSet avail = available_vectors(p, x);
    const double tol = p.tolerance();
    if (project_complement(avail.columns, p.target(), tol).norm() <= tol * p.target().norm())
        throw NoNegativeWitness("input " + format_assignment(x) + " evaluates to 1");

    // w' = N y ranges over the orthogonal complement of A(x); available
    // vectors vanish against it, so only false vectors enter B.
    const Matrix complement = nullspace_basis(avail.columns.transpose(), tol);
    const Vector c = complement.transpose() * p.target();
    const Matrix b = false_vectors(p, avail).transpose() * complement;
    const HyperplaneMinimum best = min_quadratic_on_hyperplane(b, c, tol);

    WitnessReport out;
    out.decision = false;
    out.witness = complement * best.y;
    out.size = best.value;
    return out;
}

WitnessReport optimal_witness(const LowLevelProgram& p, const Assignment& x) {
    return evaluate(p, x) ? positive_witness(p, x) : negative_witness(p, x);
}

WitnessSizes wsize_over_domain(const LowLevelProgram& p,
                               std::span<const Assignment> domain) {
    if (domain.empty()) throw MalformedInput("domain", "domain must be nonempty");
    WitnessSizes out;
    for (const auto& x : domain) {
        const WitnessReport r = optimal_witness(p, x);
        if (r.decision)
            out.w1 = std::max(out.w1, r.size);
        else
            out.w0 = std::max(out.w0, r.size);
    }
    out.combined = std::sqrt(out.w0 * out.w1);
    return out;
}

}  // namespace spanforge
