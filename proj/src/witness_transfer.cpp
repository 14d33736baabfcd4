#include "spanforge/witness_transfer.hpp"

#include "spanforge/errors.hpp"

#include <cmath>
#include <string>

namespace spanforge {

namespace {

double slot_value(const LoaderRecord& rec, const Assignment& x, std::size_t i) {
    double v = -1.0;
    for (std::size_t a = 0; a <= rec.precision; ++a)
        if (x[rec.digit_vars[i][a]]) v += std::ldexp(1.0, -static_cast<int>(a));
    return v;
}

std::size_t tree_index(const TreeRecord& rec, const Assignment& x) {
    std::size_t c = 0;
    for (std::size_t b = 0; b < rec.width(); ++b)
        if (x[rec.bit_vars[b]]) c |= std::size_t{1} << b;
    return c;
}

// Adds `amount` to every edge on the available root-to-leaf path of `rec`.
void load_path(const TreeRecord& rec, std::size_t c, double amount,
               std::vector<double>& labeled, std::vector<double>& free) {
    if (rec.free_edge) {
        free[*rec.free_edge] += amount;
        return;
    }
    for (std::size_t a = 0; a < rec.width(); ++a) {
        const std::size_t l = c & ((std::size_t{1} << a) - 1);
        const std::size_t idx = rec.edges[a][l][(c >> a) & 1U];
        if (idx == kAbsent) throw Error("routing through a truncated demultiplexor branch");
        labeled[idx] += amount;
    }
}

std::vector<ComponentCost> empty_costs(const CompiledProgram& c) {
    std::vector<ComponentCost> costs(c.components.size());
    for (std::size_t i = 0; i < costs.size(); ++i) costs[i].component = i;
    return costs;
}

void check_length(const CompiledProgram& c, const Assignment& x) {
    if (x.size() != c.program.num_vars())
        throw DimensionMismatch("assignment length differs from the number of variables");
}

}  // namespace

TransferredWitness transfer_positive_witness(const CompiledProgram& compiled,
                                             const Assignment& x,
                                             const HlWitnessReport& hl) {
    check_length(compiled, x);
    if (!hl.decision) throw NoPositiveWitness("high-level witness is not positive");
    const auto& prog = compiled.program;
    const Matrix decoded = compiled.decode(x);
    std::vector<double> lab(prog.labeled().size(), 0.0);
    std::vector<double> fr(static_cast<std::size_t>(prog.free_vectors().cols()), 0.0);

    for (Eigen::Index i = 0; i < hl.free_coefficients.size(); ++i)
        fr[static_cast<std::size_t>(i)] = hl.free_coefficients(i);

    for (const auto& rec : compiled.loaders) {
        const double wj = hl.witness(static_cast<Eigen::Index>(rec.column));
        for (std::size_t i = 0; i < rec.pivots.size(); ++i)
            for (std::size_t a = 0; a <= rec.precision; ++a)
                lab[rec.labeled[i][a][x[rec.digit_vars[i][a]]]] =
                    wj * std::pow(2.0, -0.5 * static_cast<double>(a));
        fr[rec.free_index] = wj;
    }

    const std::size_t n = compiled.rows();
    const std::size_t m = compiled.cols();
    std::vector<std::vector<bool>> routed(n, std::vector<bool>(m, false));
    std::vector<double> path_amount(compiled.trees.size(), 0.0);
    for (std::size_t t = 0; t < compiled.trees.size(); ++t) {
        const auto& rec = compiled.trees[t];
        const std::size_t c = tree_index(rec, x);
        double amount = 0.0;
        if (!rec.reversed) {
            const double wj = hl.witness(static_cast<Eigen::Index>(rec.group));
            amount = wj * slot_value(compiled.loaders[rec.group], x, rec.slot);
            if (c >= rec.leaves.size()) {
                if (amount != 0.0) throw Error("nonzero mass on an invalid row index");
                continue;
            }
        } else {
            if (c >= m || routed[rec.group][c]) continue;
            routed[rec.group][c] = true;
            amount = -hl.witness(static_cast<Eigen::Index>(c)) *
                     decoded(static_cast<Eigen::Index>(rec.group), static_cast<Eigen::Index>(c));
        }
        path_amount[t] = amount;
        load_path(rec, c, amount, lab, fr);
    }

    TransferredWitness out;
    out.costs = empty_costs(compiled);
    for (std::size_t i = 0; i < lab.size(); ++i)
        out.costs[compiled.labeled_owner[i]].labeled_cost += lab[i] * lab[i];
    for (std::size_t i = 0; i < fr.size(); ++i)
        out.costs[compiled.free_owner[i]].free_cost += fr[i] * fr[i];
    for (const auto& rec : compiled.loaders) {
        const double wj = hl.witness(static_cast<Eigen::Index>(rec.column));
        out.costs[rec.component].bound = 2.0 * static_cast<double>(rec.pivots.size()) * wj * wj;
    }
    for (std::size_t t = 0; t < compiled.trees.size(); ++t) {
        const auto& rec = compiled.trees[t];
        out.costs[rec.component].bound =
            static_cast<double>(rec.width()) * path_amount[t] * path_amount[t];
    }
    for (const auto& c : out.costs) out.size += c.labeled_cost + c.free_cost;

    const auto avail = available_vectors(prog, x);
    out.witness.resize(static_cast<Eigen::Index>(avail.sources.size()));
    for (std::size_t i = 0; i < avail.sources.size(); ++i) {
        const auto& src = avail.sources[i];
        out.witness(static_cast<Eigen::Index>(i)) =
            src.kind == ColumnSource::Kind::free ? fr[src.index] : lab[src.index];
    }
    for (std::size_t idx : avail.false_labeled)
        if (lab[idx] != 0.0) throw Error("explicit witness uses an unavailable vector");
    out.residual = (avail.columns * out.witness - prog.target()).norm();
    return out;
}

TransferredWitness transfer_negative_witness(const CompiledProgram& compiled,
                                             const Assignment& x,
                                             const HlWitnessReport& hl) {
    check_length(compiled, x);
    if (hl.decision) throw NoNegativeWitness("high-level witness is not negative");
    const auto& prog = compiled.program;
    const std::size_t n = compiled.rows();
    Vector val = Vector::Zero(static_cast<Eigen::Index>(prog.dim()));
    auto at = [&val](std::size_t coord) -> double& {
        return val(static_cast<Eigen::Index>(coord));
    };

    const std::size_t v0 = compiled.layout.blocks().front().offset;
    for (std::size_t i = 0; i < n; ++i) at(v0 + i) = hl.witness(static_cast<Eigen::Index>(i));

    const std::size_t m = compiled.cols();
    std::vector<std::vector<bool>> tied(n, std::vector<bool>(m, false));
    for (const auto& rec : compiled.trees) {
        if (!rec.reversed) continue;
        const std::size_t d = tree_index(rec, x);
        if (d < rec.leaves.size()) {
            at(rec.leaves[d]) = at(rec.root);
            tied[rec.group][d] = true;
        }
    }

    // Every node takes the value found at the end of its own available path;
    // a node whose selected branch was truncated takes its 0-branch leaf.
    // Multiplexors keep their root value, so a path ending in a truncated
    // branch carries the root value instead.
    auto propagate = [&] {
        for (const auto& rec : compiled.trees) {
            if (rec.free_edge) {
                if (!rec.reversed) at(rec.root) = at(rec.leaves[0]);
                continue;
            }
            const std::size_t w = rec.width();
            for (std::size_t a = w; a-- > 0;) {
                if (a == 0 && rec.reversed) break;
                const std::size_t width = std::size_t{1} << a;
                const std::size_t bit = x[rec.bit_vars[a]];
                for (std::size_t l = 0; l < width; ++l) {
                    const std::size_t child = bit * width + l;
                    const bool exists = !(a + 1 == w && child >= rec.leaves.size());
                    at(rec.nodes[a][l]) = exists ? at(rec.nodes[a + 1][child])
                                                 : at(rec.nodes[a + 1][l]);
                }
            }
            if (rec.reversed && tree_index(rec, x) >= rec.leaves.size()) {
                const std::size_t c = tree_index(rec, x);
                for (std::size_t a = 1; a < w; ++a)
                    at(rec.nodes[a][c & ((std::size_t{1} << a) - 1)]) = at(rec.root);
            }
        }
    };
    propagate();

    // Off the encoder image a column can be dropped by decode(); w' then need
    // not be orthogonal to what the loader produces, and the loader's free
    // vector is balanced through a component that touches no coordinate of
    // V: a leaf of W_j that no row list selects, or a slot whose path ends in
    // a truncated branch.
    std::vector<std::vector<const TreeRecord*>> column_trees(m);
    for (const auto& rec : compiled.trees)
        if (!rec.reversed) column_trees[rec.group].push_back(&rec);
    auto imbalance = [&](const LoaderRecord& ld) {
        double r = 0.0;
        for (std::size_t s = 0; s < ld.pivots.size(); ++s)
            r += at(ld.pivots[s]) * slot_value(ld, x, s);
        return r;
    };
    if (compiled.mode == CompileMode::sparse) {
        bool changed = false;
        for (const auto& ld : compiled.loaders) {
            const double r = imbalance(ld);
            if (r == 0.0) continue;
            std::vector<double> mass(n, 0.0);
            for (const TreeRecord* t : column_trees[ld.column]) {
                const std::size_t c = tree_index(*t, x);
                if (c < n) mass[c] += slot_value(ld, x, t->slot);
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (tied[i][ld.column] || mass[i] == 0.0) continue;
                const std::size_t leaf = column_trees[ld.column].front()->leaves[i];
                at(leaf) -= r / mass[i];
                changed = true;
                break;
            }
        }
        if (changed) propagate();
    }
    for (const auto& ld : compiled.loaders) {
        const double r = imbalance(ld);
        if (r == 0.0) continue;
        for (const TreeRecord* t : column_trees[ld.column]) {
            const std::size_t c = tree_index(*t, x);
            const double v = slot_value(ld, x, t->slot);
            if (c < t->leaves.size() || v == 0.0) continue;
            const double value = at(t->root) - r / v;
            for (std::size_t a = 0; a < t->width(); ++a)
                at(t->nodes[a][c & ((std::size_t{1} << a) - 1)]) = value;
            break;
        }
    }

    for (const auto& rec : compiled.loaders)
        for (std::size_t i = 0; i < rec.pivots.size(); ++i)
            for (std::size_t a = 0; a <= rec.precision; ++a)
                at(rec.work[i][a]) = x[rec.digit_vars[i][a]]
                                         ? std::pow(2.0, -0.5 * static_cast<double>(a)) *
                                               at(rec.pivots[i])
                                         : 0.0;

    TransferredWitness out;
    out.witness = val;
    out.costs = empty_costs(compiled);
    const auto avail = available_vectors(prog, x);
    for (std::size_t idx : avail.false_labeled) {
        const double ip = prog.labeled()[idx].vec.dot(val);
        out.costs[compiled.labeled_owner[idx]].labeled_cost += ip * ip;
    }
    for (const auto& rec : compiled.loaders) {
        double s = 0.0;
        for (std::size_t p : rec.pivots) s += at(p) * at(p);
        out.costs[rec.component].bound = 2.0 * s;
    }
    for (const auto& rec : compiled.trees) {
        double s = 0.0;
        for (std::size_t p : rec.leaves) s += at(p) * at(p);
        out.costs[rec.component].bound = (4.0 * static_cast<double>(rec.width()) + 4.0) * s;
    }
    for (const auto& c : out.costs) out.size += c.labeled_cost;

    out.residual = std::abs(val.dot(prog.target()) - 1.0);
    if (avail.columns.cols() > 0)
        out.residual = std::max(out.residual, (avail.columns.transpose() * val).cwiseAbs().maxCoeff());
    return out;
}

}  // namespace spanforge
