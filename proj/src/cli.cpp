#include "spanforge/cli.hpp"

#include "spanforge/calibration.hpp"
#include "spanforge/compile.hpp"
#include "spanforge/encoding.hpp"
#include "spanforge/errors.hpp"
#include "spanforge/programs.hpp"
#include "spanforge/randmat.hpp"
#include "spanforge/rank_trials.hpp"
#include "spanforge/serialize.hpp"
#include "spanforge/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spanforge {

namespace {

constexpr int kExitMalformed = 1;
constexpr int kExitInfeasible = 2;

class Infeasible : public Error {
public:
    using Error::Error;
};

struct Options {
    std::string program, highlevel, input, mode, side = "auto", kind = "trace", out,
        format = "json", config, sizes;
    std::size_t bits = 2, knnz = 1, lnnz = 1;
    std::optional<std::size_t> n, m, r, trials;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol, L, delta;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    std::string command;
    Json config = Json::object();
    Json results = Json::object();
    Table table;
};

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it)
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
        return;
    }
    if (j.is_number_float())
        os << "# " << prefix << "=" << format_double(j.get<double>()) << "\n";
    else if (j.is_string())
        os << "# " << prefix << "=" << j.get<std::string>() << "\n";
    else
        os << "# " << prefix << "=" << j.dump() << "\n";
}

std::string render(const Report& r, const std::string& format) {
    std::ostringstream os;
    if (format == "csv") {
        os << "# tool=spanforge\n# version=" << kVersion << "\n# command=" << r.command << "\n";
        flatten(calibration_json(), "calibration", os);
        flatten(r.config, "config", os);
        for (std::size_t i = 0; i < r.table.columns.size(); ++i)
            os << (i ? "," : "") << csv_escape(r.table.columns[i]);
        os << "\n";
        for (const auto& row : r.table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(row[i]);
            os << "\n";
        }
        return os.str();
    }
    Json doc;
    doc["tool"] = "spanforge";
    doc["version"] = kVersion;
    doc["command"] = r.command;
    doc["calibration"] = calibration_json();
    doc["config"] = r.config;
    doc["results"] = r.results;
    return doc.dump(2) + "\n";
}

std::uint64_t require_seed(const Options& o) {
    if (!o.seed) throw MalformedInput("seed", "required for randomized commands");
    return *o.seed;
}

std::vector<std::size_t> parse_sizes(const std::string& text, std::vector<std::size_t> fallback) {
    if (text.empty()) return fallback;
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            const long v = std::stol(item, &pos);
            if (pos != item.size() || v <= 0) throw std::invalid_argument(item);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw MalformedInput("sizes", "expected a comma-separated list of positive integers");
        }
    }
    if (out.empty()) throw MalformedInput("sizes", "empty list");
    return out;
}

Json assignment_sources(const WitnessReport& w) {
    Json out = Json::array();
    for (const auto& s : w.sources)
        out.push_back({{"kind", s.kind == ColumnSource::Kind::free ? "free" : "labeled"},
                       {"index", s.index}});
    return out;
}

std::optional<CompiledProgram> maybe_compile(const Options& o, const HighLevelProgram& p) {
    if (o.mode.empty()) return std::nullopt;
    switch (parse_compile_mode(o.mode)) {
    case CompileMode::dense: return compile_dense(p, o.bits);
    case CompileMode::sparse_cols: return compile_sparse_cols(p, o.knnz, o.bits);
    case CompileMode::sparse: return compile_sparse(p, o.knnz, o.lnnz, o.bits);
    }
    return std::nullopt;
}

void add_compile_config(const Options& o, Json& config) {
    if (o.mode.empty()) return;
    config["mode"] = o.mode;
    config["bits"] = o.bits;
    config["k_nnz"] = o.knnz;
    config["l_nnz"] = o.lnnz;
}

struct Loaded {
    std::optional<LowLevelProgram> low;
    std::optional<HighLevelProgram> high;
    std::optional<CompiledProgram> compiled;
    Assignment x;
    Matrix a;
};

Loaded load_inputs(const Options& o, Report& r) {
    if (o.program.empty() == o.highlevel.empty())
        throw MalformedInput("program", "give exactly one of --program and --highlevel");
    if (o.input.empty()) throw MalformedInput("input", "required");
    Loaded l;
    r.config["input"] = o.input;
    if (!o.program.empty()) {
        l.low.emplace(low_level_from_json(load_json(o.program, "program")));
        l.x = parse_assignment(o.input);
        if (l.x.size() != l.low->num_vars())
            throw MalformedInput("input", "expected " + std::to_string(l.low->num_vars()) + " bits");
        r.config["program"] = o.program;
        return l;
    }
    l.high.emplace(high_level_from_json(load_json(o.highlevel, "highlevel")));
    l.a = matrix_from_json(load_json(o.input, "input"), "input");
    l.high->check_input(l.a);
    r.config["highlevel"] = o.highlevel;
    add_compile_config(o, r.config);
    l.compiled = maybe_compile(o, *l.high);
    if (l.compiled) l.x = l.compiled->encode(l.a);
    return l;
}

double tolerance_of(const Options& o, double fallback) { return o.tol.value_or(fallback); }

Report cmd_evaluate(const Options& o) {
    Report r;
    r.command = "evaluate";
    auto l = load_inputs(o, r);
    if (o.tol) r.config["tol"] = *o.tol;
    r.table.columns = {"level", "decision"};
    if (l.low) {
        const bool d = evaluate(*l.low, l.x, tolerance_of(o, l.low->tolerance()));
        r.results["decision"] = d;
        r.table.rows.push_back({"low", cell(d)});
        return r;
    }
    const double tol = tolerance_of(o, l.high->tolerance());
    if (l.compiled) {
        const Matrix q = quantize(l.a, o.bits);
        const bool hl = evaluate_hl(*l.high, q, tol);
        const bool ll = evaluate(l.compiled->program, l.x, tol);
        r.results["assignment"] = format_assignment(l.x);
        r.results["decision_highlevel"] = hl;
        r.results["decision_compiled"] = ll;
        r.table.rows.push_back({"high", cell(hl)});
        r.table.rows.push_back({"compiled", cell(ll)});
        return r;
    }
    const bool hl = evaluate_hl(*l.high, l.a, tol);
    r.results["decision"] = hl;
    r.table.rows.push_back({"high", cell(hl)});
    return r;
}

Report cmd_witness(const Options& o) {
    Report r;
    r.command = "witness";
    if (o.side != "auto" && o.side != "positive" && o.side != "negative")
        throw MalformedInput("side", "expected auto, positive or negative");
    auto l = load_inputs(o, r);
    r.config["side"] = o.side;
    r.table.columns = {"decision", "side", "size"};
    try {
        if (l.low || l.compiled) {
            const LowLevelProgram& p = l.low ? *l.low : l.compiled->program;
            const WitnessReport w = o.side == "positive"   ? positive_witness(p, l.x)
                                    : o.side == "negative" ? negative_witness(p, l.x)
                                                           : optimal_witness(p, l.x);
            const char* side = w.decision ? "positive" : "negative";
            r.results["decision"] = w.decision;
            r.results["side"] = side;
            r.results["size"] = number_or_null(w.size);
            r.results["witness"] = to_json(w.witness);
            if (w.decision) r.results["sources"] = assignment_sources(w);
            if (l.compiled) r.results["assignment"] = format_assignment(l.x);
            r.table.rows.push_back({cell(w.decision), side, cell(w.size)});
            return r;
        }
        const auto& p = *l.high;
        const HlWitnessReport w = o.side == "positive"   ? positive_witness_hl(p, l.a)
                                  : o.side == "negative" ? negative_witness_hl(p, l.a)
                                                         : optimal_witness_hl(p, l.a);
        const char* side = w.decision ? "positive" : "negative";
        r.results["decision"] = w.decision;
        r.results["side"] = side;
        r.results["size"] = number_or_null(w.size);
        r.results["witness"] = to_json(w.witness);
        if (w.decision) r.results["free_coefficients"] = to_json(w.free_coefficients);
        r.table.rows.push_back({cell(w.decision), side, cell(w.size)});
        return r;
    } catch (const NoPositiveWitness& e) {
        throw Infeasible(std::string("no positive witness: ") + e.what());
    } catch (const NoNegativeWitness& e) {
        throw Infeasible(std::string("no negative witness: ") + e.what());
    }
}

Report cmd_compile(const Options& o) {
    Report r;
    r.command = "compile";
    if (o.highlevel.empty()) throw MalformedInput("highlevel", "required");
    if (o.mode.empty()) throw MalformedInput("mode", "required");
    const auto p = high_level_from_json(load_json(o.highlevel, "highlevel"));
    r.config["highlevel"] = o.highlevel;
    add_compile_config(o, r.config);
    const auto c = maybe_compile(o, p);
    r.results["program"] = to_json(*c);
    if (!o.input.empty()) {
        r.config["input"] = o.input;
        r.results["assignment"] = format_assignment(c->encode(matrix_from_json(load_json(o.input, "input"), "input")));
    }
    r.table.columns = {"index", "name", "role", "major", "slot", "bit"};
    for (const auto& v : r.results["program"]["encoder"]["variables"])
        r.table.rows.push_back({v["index"].dump(), v["name"].get<std::string>(),
                                v["role"].get<std::string>(), v["major"].dump(),
                                v["slot"].dump(), v["bit"].dump()});
    return r;
}

Report cmd_rank(const Options& o) {
    Report r;
    r.command = "rank-experiment";
    RankTrialConfig cfg;
    if (!o.config.empty()) cfg = rank_config_from_json(load_json(o.config, "config"));
    if (o.n) cfg.n = *o.n;
    if (o.m) cfg.m = *o.m;
    else if (o.n && o.config.empty()) cfg.m = *o.n;
    if (o.r) cfg.r = *o.r;
    if (o.L) cfg.L = *o.L;
    if (o.trials) cfg.trials = *o.trials;
    if (o.tol) cfg.tolerance = *o.tol;
    if (o.seed) cfg.master_seed = *o.seed;
    else if (o.config.empty() || !load_json(o.config, "config").contains("master_seed"))
        require_seed(o);
    r.config = to_json(cfg);
    const auto s = run_rank_trials(cfg);
    const double floor = rank_success_floor(cfg.trials);
    auto side = [&](const RankSideSummary& x, const char* name, double bound) {
        r.results[name] = {{"trials", x.trials},
                           {"correct", x.correct},
                           {"within_bound", x.within_bound},
                           {"fraction", x.fraction},
                           {"required", floor},
                           {"max_size", x.max_size},
                           {"median_size", x.median_size}};
        r.table.rows.push_back({name, cell(x.trials), cell(x.correct), cell(x.within_bound),
                                cell(x.fraction), cell(floor), cell(bound), cell(x.max_size),
                                cell(x.median_size)});
    };
    r.results["constant"] = s.constant;
    r.results["negative_threshold"] = s.negative_threshold;
    r.table.columns = {"side",     "trials",   "correct",  "within_bound", "fraction",
                       "required", "bound",    "max_size", "median_size"};
    side(s.positive, "positive", s.constant);
    side(s.negative, "negative", s.negative_threshold);
    return r;
}

Report cmd_wishart(const Options& o) {
    Report r;
    r.command = "wishart-experiment";
    const std::uint64_t seed = require_seed(o);
    r.config["kind"] = o.kind;
    r.config["seed"] = seed;
    if (o.kind == "trace" || o.kind == "block") {
        const bool block = o.kind == "block";
        const std::size_t n = o.n.value_or(block ? 10 : 3);
        const std::size_t m = o.m.value_or(n + 5);
        const std::size_t trials = o.trials.value_or(100000);
        r.config["n"] = n;
        if (!block) r.config["m"] = m;
        r.config["trials"] = trials;
        const auto e = block ? exp_leading_block_trace(n, trials, seed)
                             : exp_inverse_wishart_trace(n, m, trials, seed);
        const double z = (e.estimate.mean - e.expected) / e.estimate.std_error;
        r.results = {{"n", e.n},           {"m", e.m},
                     {"trials", e.trials}, {"estimate", e.estimate.mean},
                     {"std_error", e.estimate.std_error}, {"expected", e.expected},
                     {"z", z}};
        r.table.columns = {"n", "m", "trials", "estimate", "std_error", "expected", "z"};
        r.table.rows.push_back({cell(e.n), cell(e.m), cell(e.trials), cell(e.estimate.mean),
                                cell(e.estimate.std_error), cell(e.expected), cell(z)});
        return r;
    }
    if (o.kind == "lambda-min") {
        const std::size_t n = o.n.value_or(100);
        const std::size_t trials = o.trials.value_or(10000);
        r.config["n"] = n;
        r.config["trials"] = trials;
        const auto e = exp_lambda_min_cdf(n, trials, seed);
        r.results = {{"n", n},
                     {"trials", trials},
                     {"ks", e.ks},
                     {"empirical_median", e.empirical_median},
                     {"limit_median", e.limit_median}};
        r.table.columns = {"n", "trials", "ks", "empirical_median", "limit_median"};
        r.table.rows.push_back({cell(n), cell(trials), cell(e.ks), cell(e.empirical_median),
                                cell(e.limit_median)});
        return r;
    }
    if (o.kind == "c-bounded") {
        const auto sizes = parse_sizes(o.sizes, o.n ? std::vector<std::size_t>{*o.n}
                                                    : std::vector<std::size_t>{10, 50, 100});
        const std::size_t trials = o.trials.value_or(2000);
        const double delta = o.delta.value_or(calibration::kDelta);
        r.config["sizes"] = sizes;
        r.config["trials"] = trials;
        r.config["delta"] = delta;
        const auto e = exp_c_bounded(sizes, trials, delta, seed);
        r.table.columns = {"n", "trials", "exceedances", "probability", "std_error"};
        Json rows = Json::array();
        for (const auto& row : e.rows) {
            rows.push_back({{"n", row.n},
                            {"trials", row.trials},
                            {"exceedances", row.exceedances},
                            {"probability", row.probability},
                            {"std_error", row.std_error}});
            r.table.rows.push_back({cell(row.n), cell(row.trials), cell(row.exceedances),
                                    cell(row.probability), cell(row.std_error)});
        }
        r.results["rows"] = std::move(rows);
        return r;
    }
    throw MalformedInput("kind", "expected trace, block, lambda-min or c-bounded");
}

Report cmd_ratio(const Options& o) {
    Report r;
    r.command = "ratio-experiment";
    const std::uint64_t seed = require_seed(o);
    const auto sizes = parse_sizes(o.sizes, {50, 100, 200, 400});
    const std::size_t trials = o.trials.value_or(1000);
    r.config["sizes"] = sizes;
    r.config["trials"] = trials;
    r.config["seed"] = seed;
    const auto e = exp_ratio_scaling(sizes, trials, seed);
    r.table.columns = {"n", "trials", "median_ratio", "min_ratio", "slope"};
    Json rows = Json::array();
    for (const auto& row : e.rows) {
        rows.push_back({{"n", row.n},
                        {"trials", row.trials},
                        {"median_ratio", row.median_ratio},
                        {"min_ratio", row.min_ratio}});
        r.table.rows.push_back({cell(row.n), cell(row.trials), cell(row.median_ratio),
                                cell(row.min_ratio), cell(e.fit.slope)});
    }
    r.results["rows"] = std::move(rows);
    r.results["slope"] = e.fit.slope;
    return r;
}

Report cmd_lowerbound(const Options&) {
    Report r;
    r.command = "lowerbound-suite";
    r.table.columns = {"program", "n", "m", "inputs", "w1", "w0", "combined", "claim_w1",
                       "claim_w0"};
    Json rows = Json::array();
    auto add = [&](const std::string& name, std::size_t n, std::size_t m, std::size_t inputs,
                   const WitnessSizes& w, double claim1, double claim0) {
        rows.push_back({{"program", name}, {"n", n}, {"m", m}, {"inputs", inputs},
                        {"w1", w.w1}, {"w0", w.w0}, {"combined", w.combined},
                        {"claim_w1", claim1}, {"claim_w0", claim0}});
        r.table.rows.push_back({name, cell(n), cell(m), cell(inputs), cell(w.w1), cell(w.w0),
                                cell(w.combined), cell(claim1), cell(claim0)});
    };
    for (std::size_t n : {2, 4, 6})
        for (std::size_t m : {1, 2, 3}) {
            const auto family = grover_dj_family(n, m);
            add("grover_dj", n, m, family.size(),
                wsize_over_family(grover_dj_program(n, m), family), 1.0,
                1.0 / static_cast<double>(n));
        }
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<Matrix> family{unique_search_input(Assignment(n, 0))};
        for (std::size_t i = 0; i < n; ++i) {
            Assignment x(n, 0);
            x[i] = 1;
            family.push_back(unique_search_input(x));
        }
        add("unique_search", n, 1, family.size(),
            wsize_over_family(unique_search_program(n), family), 1.0, 2.0);
    }
    r.results["rows"] = std::move(rows);
    return r;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw MalformedInput("out", "cannot write '" + o.out + "'");
    f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"spanforge: span program workbench", "spanforge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Write the report to this file instead of stdout");
        sub->add_option("--format", o.format, "Report format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", o.tol, "Numerical tolerance");
    };
    auto program_flags = [&](CLI::App* sub) {
        sub->add_option("--program", o.program, "Low-level program JSON (file or inline)");
        sub->add_option("--highlevel", o.highlevel, "High-level program JSON (file or inline)");
        sub->add_option("--input", o.input, "Bit string, or input matrix JSON");
        sub->add_option("--mode", o.mode, "Compile mode: dense, sparse_cols or sparse");
        sub->add_option("--bits", o.bits, "Fixed-point precision k");
        sub->add_option("--knnz", o.knnz, "Nonzeros per column (sparse modes)");
        sub->add_option("--lnnz", o.lnnz, "Nonzeros per row (sparse mode)");
    };
    auto random_flags = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Master seed");
        sub->add_option("--trials", o.trials, "Number of trials");
        sub->add_option("--n", o.n, "Rows / dimension");
        sub->add_option("--m", o.m, "Columns / degrees of freedom");
    };

    auto* ev = app.add_subcommand("evaluate", "Evaluate a program on one input");
    program_flags(ev);
    common(ev);
    auto* wi = app.add_subcommand("witness", "Optimal witness for one input");
    program_flags(wi);
    common(wi);
    wi->add_option("--side", o.side, "auto, positive or negative");
    auto* co = app.add_subcommand("compile", "Compile a high-level program");
    program_flags(co);
    common(co);
    auto* ra = app.add_subcommand("rank-experiment", "Seeded trials of the rank program");
    random_flags(ra);
    common(ra);
    ra->add_option("--r", o.r, "Rank threshold");
    ra->add_option("--L", o.L, "Promised bound on c_r (0: measured per instance)");
    ra->add_option("--config", o.config, "Experiment configuration JSON");
    auto* wa = app.add_subcommand("wishart-experiment", "Wishart Monte Carlo experiments");
    random_flags(wa);
    common(wa);
    wa->add_option("--kind", o.kind, "trace, block, lambda-min or c-bounded");
    wa->add_option("--sizes", o.sizes, "Comma-separated sizes (c-bounded)");
    wa->add_option("--delta", o.delta, "Threshold on c(A) (c-bounded)");
    auto* rt = app.add_subcommand("ratio-experiment", "Median (1/sigma_min)/c(A) against n");
    random_flags(rt);
    common(rt);
    rt->add_option("--sizes", o.sizes, "Comma-separated sizes");
    auto* lb = app.add_subcommand("lowerbound-suite", "Exact witness sizes of the examples");
    common(lb);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitMalformed;
    }

    try {
        Report r;
        if (ev->parsed()) r = cmd_evaluate(o);
        else if (wi->parsed()) r = cmd_witness(o);
        else if (co->parsed()) r = cmd_compile(o);
        else if (ra->parsed()) r = cmd_rank(o);
        else if (wa->parsed()) r = cmd_wishart(o);
        else if (rt->parsed()) r = cmd_ratio(o);
        else r = cmd_lowerbound(o);
        write_output(o, render(r, o.format), out);
        return 0;
    } catch (const Infeasible& e) {
        err << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const MalformedInput& e) {
        err << "error: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitMalformed;
    }
}

}  // namespace spanforge
