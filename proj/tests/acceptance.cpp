// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and trial
// counts are fixed here; the process exits nonzero if any criterion fails.

#include "helpers.hpp"
#include "spanforge/calibration.hpp"
#include "spanforge/cli.hpp"
#include "spanforge/compile.hpp"
#include "spanforge/encoding.hpp"
#include "spanforge/errors.hpp"
#include "spanforge/fixtures.hpp"
#include "spanforge/programs.hpp"
#include "spanforge/randmat.hpp"
#include "spanforge/rank_trials.hpp"
#include "spanforge/serialize.hpp"
#include "spanforge/stats.hpp"
#include "spanforge/witness_transfer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace spanforge;
using namespace spanforge::test;

namespace {

constexpr std::uint64_t kSeed = 20241016;
constexpr double kExact = 1e-9;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// --- 1 ---------------------------------------------------------------------

Outcome witness_duality() {
    std::size_t checked = 0, bad = 0;
    double worst = 0.0;
    for (std::size_t s = 0; s < 1000; ++s) {
        RngStream rng(kSeed, s);
        const std::size_t dim = 1 + s % 5, vars = 1 + (s / 5) % 4;
        const auto p = random_program(dim, vars, rng);
        for (const auto& x : all_assignments(vars)) {
            ++checked;
            const bool decision = evaluate(p, x);
            const auto avail = available_vectors(p, x);
            bool has_pos = false, has_neg = false;
            try {
                const auto w = positive_witness(p, x);
                has_pos = true;
                worst = std::max(worst, (avail.columns * w.witness - p.target()).norm());
            } catch (const NoPositiveWitness&) {
            }
            try {
                const auto w = negative_witness(p, x);
                has_neg = true;
                worst = std::max(worst, std::abs(w.witness.dot(p.target()) - 1.0));
                if (avail.columns.cols() > 0)
                    worst = std::max(worst, (avail.columns.transpose() * w.witness).cwiseAbs().maxCoeff());
            } catch (const NoNegativeWitness&) {
            }
            if (has_pos == has_neg || has_pos != decision) ++bad;
        }
    }
    return {bad == 0 && worst <= kExact,
            std::to_string(checked) + " inputs, " + std::to_string(bad) +
                " violations, worst witness residual " + fmt(worst)};
}

// --- 2 ---------------------------------------------------------------------

Outcome lower_bound_examples() {
    bool ok = true;
    double worst_excess = 0.0;
    for (std::size_t n : {2, 4, 6})
        for (std::size_t m : {1, 2, 3}) {
            const auto w = wsize_over_family(grover_dj_program(n, m), grover_dj_family(n, m));
            const double e1 = w.w1 - 1.0, e0 = w.w0 - 1.0 / double(n);
            worst_excess = std::max({worst_excess, e1, e0});
            ok = ok && e1 <= kExact && e0 <= kExact;
        }
    double worst_unit = 0.0;
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto p = unique_search_program(n);
        const auto pos = positive_witness_hl(p, unique_search_input(Assignment(n, 0)));
        worst_unit = std::max(worst_unit, std::abs(pos.size - 1.0));
        ok = ok && std::abs(pos.size - 1.0) <= kExact;
        for (std::size_t i = 0; i < n; ++i) {
            Assignment x(n, 0);
            x[i] = 1;
            const auto neg = negative_witness_hl(p, unique_search_input(x));
            worst_excess = std::max(worst_excess, neg.size - 2.0);
            ok = ok && neg.size <= 2.0 + kExact;
        }
    }
    return {ok, "largest excess over the claimed bounds " + fmt(worst_excess) +
                    ", unique-search |w1 - 1| " + fmt(worst_unit)};
}

// --- 3 ---------------------------------------------------------------------

struct EquivalenceFixture {
    std::string name;
    CompiledProgram compiled;
};

std::vector<HighLevelProgram> programs_for(std::size_t n, std::size_t m, std::uint64_t id) {
    RngStream rng(kSeed + 3, id);
    std::vector<HighLevelProgram> out;
    out.emplace_back(unit(n, 0), m);
    out.emplace_back(Vector::Constant(static_cast<Eigen::Index>(n), 0.5), m);
    if (n > 1)
        out.emplace_back(gaussian(static_cast<Eigen::Index>(n), 1, rng), m,
                         gaussian(static_cast<Eigen::Index>(n), 1, rng));
    return out;
}

std::vector<EquivalenceFixture> equivalence_fixtures() {
    std::vector<EquivalenceFixture> out;
    std::uint64_t id = 0;
    auto name = [](const char* mode, std::size_t n, std::size_t m, std::size_t k) {
        return std::string(mode) + " " + std::to_string(n) + "x" + std::to_string(m) + " k=" +
               std::to_string(k);
    };
    const std::vector<std::array<std::size_t, 3>> dense{{1, 1, 2}, {2, 2, 2}, {3, 2, 1}, {2, 3, 1},
                                                        {3, 3, 0}, {3, 1, 2}, {1, 3, 2}};
    for (const auto& [n, m, k] : dense)
        for (const auto& p : programs_for(n, m, id++)) out.push_back({name("dense", n, m, k), compile_dense(p, k)});
    const std::vector<std::array<std::size_t, 4>> cols{{2, 2, 1, 1}, {3, 2, 2, 1}, {3, 3, 1, 1},
                                                       {3, 2, 1, 2}, {2, 3, 2, 0}};
    for (const auto& [n, m, kn, k] : cols)
        for (const auto& p : programs_for(n, m, id++))
            out.push_back({name("sparse_cols", n, m, k), compile_sparse_cols(p, kn, k)});
    const std::vector<std::array<std::size_t, 5>> sparse{
        {2, 2, 1, 1, 1}, {3, 2, 1, 1, 0}, {2, 3, 1, 2, 0}, {3, 3, 1, 1, 0}, {2, 2, 2, 2, 0}};
    for (const auto& [n, m, kn, ln, k] : sparse)
        for (const auto& p : programs_for(n, m, id++))
            out.push_back({name("sparse", n, m, k), compile_sparse(p, kn, ln, k)});
    const HighLevelProgram threshold(Vector::Ones(2), 2);
    out.push_back({"threshold dense 2x2 k=1", compile_dense(threshold, 1)});
    return out;
}

// Reads the sparse description an assignment spells out and re-encodes it;
// the assignment is in the encoder image iff that succeeds and round-trips.
bool in_image(const CompiledProgram& c, const Assignment& x) {
    if (c.mode == CompileMode::dense) return true;
    SparseColumns cols;
    cols.rows = c.rows();
    cols.index.assign(c.cols(), std::vector<std::size_t>(c.k_nnz, 0));
    cols.value.assign(c.cols(), std::vector<double>(c.k_nnz, -1.0));
    RowLists rows;
    rows.cols.assign(c.rows(), std::vector<std::size_t>(c.l_nnz, 0));
    for (std::size_t v = 0; v < x.size(); ++v) {
        const auto& var = c.variables[v];
        if (!x[v]) continue;
        switch (var.role) {
        case InputVariable::Role::digit:
            cols.value[var.major][var.slot] += std::ldexp(1.0, -static_cast<int>(var.bit));
            break;
        case InputVariable::Role::column_index:
            cols.index[var.major][var.slot] |= std::size_t{1} << var.bit;
            break;
        case InputVariable::Role::row_index:
            rows.cols[var.major][var.slot] |= std::size_t{1} << var.bit;
            break;
        }
    }
    try {
        return c.encode(cols, c.mode == CompileMode::sparse ? &rows : nullptr) == x;
    } catch (const MalformedInput&) {
        return false;
    }
}

// Enumerates every Boolean assignment of each fixture. Image points are
// compared against the quantized matrix they encode; the remaining
// assignments against the matrix decode() says the program tests.
Outcome compilation_equivalence() {
    std::size_t fixtures = 0, assignments = 0, image = 0, mismatches = 0, positives = 0;
    for (const auto& f : equivalence_fixtures()) {
        ++fixtures;
        const auto& c = f.compiled;
        for (const auto& x : all_assignments(c.program.num_vars())) {
            ++assignments;
            const Matrix a = c.decode(x);
            bool hl;
            if (in_image(c, x)) {
                ++image;
                if (!on_grid(a, c.precision)) ++mismatches;
                hl = evaluate_hl(c.source, quantize(a, c.precision));
            } else {
                hl = evaluate_hl(c.source, a);
            }
            positives += hl;
            if (evaluate(c.program, x) != hl) ++mismatches;
        }
    }
    return {mismatches == 0 && positives > 0 && positives < assignments,
            std::to_string(fixtures) + " programs, " + std::to_string(image) +
                " encoder-image assignments plus " + std::to_string(assignments - image) +
                " others (" + std::to_string(positives) + " accepted), " +
                std::to_string(mismatches) + " mismatches"};
}

// --- 4 ---------------------------------------------------------------------

Outcome cost_bounds() {
    std::size_t fixtures = 0, inputs = 0, violations = 0;
    double worst_ratio = 0.0, worst_residual = 0.0;
    for (std::size_t s = 0; s < 200; ++s) {
        RngStream rng(kSeed + 4, s);
        const std::size_t n = 2 + s % 3, m = 1 + (s / 3) % 3, k = s % 3;
        const std::size_t kn = 1 + (s / 9) % n;
        const std::size_t ln = 1 + (s / 7) % m;
        const auto f = random_sparse_fixture(n, m, kn, s % 3 == 2 ? ln : 0, k, (s / 2) % 2, 6, rng);
        CompiledProgram c = s % 3 == 0   ? compile_dense(f.program, k)
                            : s % 3 == 1 ? compile_sparse_cols(f.program, f.k_nnz, k)
                                         : compile_sparse(f.program, f.k_nnz, f.l_nnz, k);
        ++fixtures;
        for (const auto& a : f.family) {
            ++inputs;
            const Assignment x = c.encode(a);
            const Matrix q = c.decode(x);
            const bool positive = evaluate_hl(c.source, q);
            const auto t = positive ? transfer_positive_witness(c, x, positive_witness_hl(c.source, q))
                                    : transfer_negative_witness(c, x, negative_witness_hl(c.source, q));
            const double optimal = positive ? positive_witness(c.program, x).size
                                            : negative_witness(c.program, x).size;
            double bound_sum = 0.0;
            for (const auto& cost : t.costs) {
                bound_sum += cost.bound + cost.free_cost;
                if (cost.labeled_cost > cost.bound * (1 + 1e-9) + 1e-12) ++violations;
                if (cost.bound > 0) worst_ratio = std::max(worst_ratio, cost.labeled_cost / cost.bound);
            }
            if (optimal > bound_sum * (1 + 1e-9) + 1e-12) ++violations;
            worst_residual = std::max(worst_residual, t.residual);
        }
    }
    return {violations == 0 && worst_residual <= kExact,
            std::to_string(fixtures) + " fixtures, " + std::to_string(inputs) + " inputs, " +
                std::to_string(violations) + " violations, largest cost/bound " + fmt(worst_ratio) +
                ", worst residual " + fmt(worst_residual)};
}

// --- 5 ---------------------------------------------------------------------

Outcome dense_overhead_slope() {
    std::vector<double> nm, overhead;
    for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t m = 1; m <= 4; ++m) {
            std::vector<double> samples;
            for (std::size_t s = 0; s < 5; ++s) {
                RngStream rng(kSeed + 5, (n * 10 + m) * 100 + s);
                const auto f = random_sparse_fixture(n, m, n, 0, 1, 0, 8, rng);
                samples.push_back(measure_overhead(f.program, compile_dense(f.program, 1), f.family));
            }
            nm.push_back(double(n * m));
            overhead.push_back(median(samples));
        }
    const double slope = fit_loglog(nm, overhead).slope;
    return {slope >= 0.35 && slope <= 0.65,
            "slope of log overhead against log(nm) over 1..4 x 1..4 is " + fmt(slope) +
                " (band [0.35, 0.65])"};
}

// --- 6 ---------------------------------------------------------------------

Outcome inverse_wishart() {
    const auto a = exp_inverse_wishart_trace(3, 8, 100000, kSeed + 6);
    const auto b = exp_inverse_wishart_trace(5, 10, 100000, kSeed + 7);
    const auto c = exp_leading_block_trace(10, 100000, kSeed + 8);
    auto z = [](const TraceExperiment& e) { return (e.estimate.mean - e.expected) / e.estimate.std_error; };
    const bool ok = std::abs(z(a)) <= 3 && std::abs(z(b)) <= 3 && std::abs(z(c)) <= 3;
    return {ok, "(3,8): " + fmt(a.estimate.mean) + " vs 0.75 (z=" + fmt(z(a)) + "); (5,10): " +
                    fmt(b.estimate.mean) + " vs 1.25 (z=" + fmt(z(b)) + "); block n=10: " +
                    fmt(c.estimate.mean) + " vs 8 (z=" + fmt(z(c)) + ")"};
}

// --- 7 ---------------------------------------------------------------------

Outcome lambda_min_law() {
    const auto e = exp_lambda_min_cdf(100, 10000, kSeed + 9);
    return {e.ks <= 0.05, "KS " + fmt(e.ks) + " at n=100 over 10^4 trials; empirical median " +
                              fmt(e.empirical_median) + ", limit " + fmt(e.limit_median)};
}

// --- 8 ---------------------------------------------------------------------

Outcome c_bounded_and_ratio() {
    const auto e = exp_c_bounded({10, 50, 100}, 10000, calibration::kDelta, kSeed + 10);
    bool flat = true;
    std::string probs;
    const auto& base = e.rows.front();
    for (const auto& row : e.rows) {
        const double band = 3.0 * std::hypot(row.std_error, base.std_error);
        flat = flat && std::abs(row.probability - base.probability) <= band;
        probs += (probs.empty() ? "" : ", ") + std::string("n=") + std::to_string(row.n) + ": " +
                 fmt(row.probability);
    }
    const auto r = exp_ratio_scaling({50, 100, 200, 400}, 1000, kSeed + 11);
    const bool slope_ok = r.fit.slope >= 0.4 && r.fit.slope <= 0.6;
    return {flat && slope_ok, "Pr[c > " + fmt(e.delta) + "] " + probs + "; ratio slope " +
                                  fmt(r.fit.slope) + " (band [0.4, 0.6])"};
}

// --- 9 ---------------------------------------------------------------------

Outcome rank_program() {
    bool ok = true;
    std::size_t settings = 0;
    double worst_pos = 1.0, worst_neg = 1.0;
    const double floor = rank_success_floor(500);
    for (std::size_t n : {2, 4, 8}) {
        std::vector<std::size_t> rs{1, n / 2, n};
        rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        for (std::size_t r : rs) {
            RankTrialConfig cfg;
            cfg.n = n;
            cfg.m = n;
            cfg.r = r;
            cfg.trials = 500;
            cfg.master_seed = kSeed + 12 + n * 10 + r;
            const auto s = run_rank_trials(cfg);
            ++settings;
            ok = ok && s.positive.correct == s.positive.trials && s.negative.correct == s.negative.trials;
            ok = ok && s.positive.fraction >= floor && s.negative.fraction >= floor;
            worst_pos = std::min(worst_pos, s.positive.fraction);
            worst_neg = std::min(worst_neg, s.negative.fraction);
        }
    }
    return {ok, std::to_string(settings) + " settings x 500 trials per side; lowest within-bound "
                "fraction positive " + fmt(worst_pos) + ", negative " + fmt(worst_neg) +
                    " (floor " + fmt(floor) + ")"};
}

// --- 10 --------------------------------------------------------------------

std::string cli_report(std::vector<std::string> args) {
    args.insert(args.begin(), "spanforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    if (code != 0) throw Error("command failed: " + err.str());
    return out.str();
}

Outcome determinism() {
    const std::string seed = std::to_string(kSeed + 13);
    const std::vector<std::vector<std::string>> commands{
        {"rank-experiment", "--n", "4", "--r", "2", "--trials", "100", "--seed", seed},
        {"wishart-experiment", "--kind", "trace", "--n", "3", "--m", "8", "--trials", "2000", "--seed", seed},
        {"wishart-experiment", "--kind", "block", "--n", "10", "--trials", "500", "--seed", seed},
        {"wishart-experiment", "--kind", "lambda-min", "--n", "30", "--trials", "500", "--seed", seed},
        {"wishart-experiment", "--kind", "c-bounded", "--sizes", "10,20", "--trials", "500", "--seed", seed},
        {"ratio-experiment", "--sizes", "10,20", "--trials", "100", "--seed", seed},
    };
    std::size_t identical = 0, total = 0;
    for (const auto& c : commands)
        for (const std::string format : {"csv", "json"}) {
            auto args = c;
            args.push_back("--format");
            args.push_back(format);
            setenv("SPANFORGE_THREADS", "1", 1);
            const std::string a = cli_report(args);
            setenv("SPANFORGE_THREADS", "3", 1);
            const std::string b = cli_report(args);
            unsetenv("SPANFORGE_THREADS");
            const std::string again = cli_report(args);
            ++total;
            if (a == b && b == again) ++identical;
        }
    return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                    " reports byte-identical across reruns and thread counts"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"witness duality", witness_duality},
        {"lower-bound example witness sizes", lower_bound_examples},
        {"compilation equivalence", compilation_equivalence},
        {"subroutine cost bounds", cost_bounds},
        {"dense overhead scaling", dense_overhead_slope},
        {"inverse Wishart trace", inverse_wishart},
        {"smallest eigenvalue limit law", lambda_min_law},
        {"bounded c(A) and ratio scaling", c_bounded_and_ratio},
        {"rank program trials", rank_program},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
                  << criteria[i].first << " -- " << o.detail << " [" << fmt(secs) << " s]"
                  << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
