#include "spanforge/serialize.hpp"

#include "spanforge/calibration.hpp"
#include "spanforge/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spanforge {

namespace {

const Json& require(const Json& j, const std::string& key, const std::string& prefix = {}) {
    if (!j.is_object()) throw MalformedInput(prefix.empty() ? "<root>" : prefix, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) throw MalformedInput(prefix + key, "missing");
    return *it;
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) throw MalformedInput(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw MalformedInput(field, "expected a finite number");
    return v;
}

std::size_t count(const Json& j, const std::string& field) {
    if (j.is_number_unsigned()) return j.get<std::size_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::size_t>(j.get<long long>());
    throw MalformedInput(field, "expected a non-negative integer");
}

double optional_number(const Json& j, const std::string& key, double fallback) {
    const auto it = j.find(key);
    return it == j.end() ? fallback : number(*it, key);
}

Matrix columns_from_json(const Json& j, const std::string& field, std::size_t rows) {
    if (!j.is_array()) throw MalformedInput(field, "expected an array of vectors");
    Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c) {
        const std::string f = field + "[" + std::to_string(c) + "]";
        const Vector v = vector_from_json(j[c], f);
        if (static_cast<std::size_t>(v.size()) != rows)
            throw MalformedInput(f, "expected length " + std::to_string(rows));
        out.col(static_cast<Eigen::Index>(c)) = v;
    }
    return out;
}

Json columns_to_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(Vector(m.col(c))));
    return out;
}

const char* role_name(InputVariable::Role r) {
    switch (r) {
    case InputVariable::Role::digit: return "digit";
    case InputVariable::Role::column_index: return "column_index";
    case InputVariable::Role::row_index: return "row_index";
    }
    return "?";
}

}  // namespace

Json to_json(const Vector& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json to_json(const Matrix& m) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vector(m.row(i).transpose())));
    return out;
}

Json to_json(const LowLevelProgram& p) {
    Json out;
    out["dim"] = p.dim();
    out["num_vars"] = p.num_vars();
    out["target"] = to_json(p.target());
    out["free"] = columns_to_json(p.free_vectors());
    Json labeled = Json::array();
    for (const auto& lv : p.labeled())
        labeled.push_back({{"vec", to_json(lv.vec)}, {"var", lv.var}, {"val", lv.value}});
    out["labeled"] = std::move(labeled);
    out["tol"] = p.tolerance();
    return out;
}

Json to_json(const HighLevelProgram& p) {
    Json out;
    out["n"] = p.space_dim();
    out["m"] = p.num_inputs();
    out["target"] = to_json(p.target());
    out["free_basis"] = columns_to_json(p.free_basis());
    out["domain"] = p.domain_note();
    out["tol"] = p.tolerance();
    return out;
}

Json to_json(const CompiledProgram& c) {
    Json out = to_json(c.program);
    Json enc;
    enc["mode"] = to_string(c.mode);
    enc["k"] = c.precision;
    enc["k_nnz"] = c.k_nnz;
    enc["l_nnz"] = c.l_nnz;
    enc["n"] = c.rows();
    enc["m"] = c.cols();
    Json vars = Json::array();
    for (std::size_t i = 0; i < c.variables.size(); ++i) {
        const auto& v = c.variables[i];
        vars.push_back({{"index", i},
                        {"name", v.name()},
                        {"role", role_name(v.role)},
                        {"major", v.major},
                        {"slot", v.slot},
                        {"bit", v.bit}});
    }
    enc["variables"] = std::move(vars);
    Json layout = Json::array();
    for (const auto& b : c.layout.blocks())
        layout.push_back({{"name", b.name}, {"offset", b.offset}, {"size", b.size}});
    enc["layout"] = std::move(layout);
    out["encoder"] = std::move(enc);
    out["source"] = to_json(c.source);
    return out;
}

Json to_json(const RankTrialConfig& c) {
    Json out;
    out["n"] = c.n;
    out["m"] = c.m;
    out["r"] = c.r;
    out["L"] = c.L;
    out["trials"] = c.trials;
    out["master_seed"] = c.master_seed;
    out["tolerance"] = c.tolerance;
    return out;
}

Vector vector_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) throw MalformedInput(field, "expected an array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = number(j[i], field + "[" + std::to_string(i) + "]");
    return v;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
    if (!j.is_array()) throw MalformedInput(field, "expected an array of rows");
    if (j.empty()) return Matrix(0, 0);
    const Vector first = vector_from_json(j[0], field + "[0]");
    Matrix out(static_cast<Eigen::Index>(j.size()), first.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string f = field + "[" + std::to_string(i) + "]";
        const Vector row = vector_from_json(j[i], f);
        if (row.size() != first.size()) throw MalformedInput(f, "rows differ in length");
        out.row(static_cast<Eigen::Index>(i)) = row.transpose();
    }
    return out;
}

LowLevelProgram low_level_from_json(const Json& j) {
    const Vector target = vector_from_json(require(j, "target"), "target");
    const std::size_t dim = count(require(j, "dim"), "dim");
    if (static_cast<std::size_t>(target.size()) != dim)
        throw MalformedInput("target", "expected length " + std::to_string(dim));
    const std::size_t num_vars = count(require(j, "num_vars"), "num_vars");
    Matrix free(static_cast<Eigen::Index>(dim), 0);
    if (j.contains("free")) free = columns_from_json(j["free"], "free", dim);
    std::vector<LabeledVector> labeled;
    if (j.contains("labeled")) {
        const Json& arr = j["labeled"];
        if (!arr.is_array()) throw MalformedInput("labeled", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string p = "labeled[" + std::to_string(i) + "].";
            LabeledVector lv;
            lv.vec = vector_from_json(require(arr[i], "vec", p), p + "vec");
            lv.var = count(require(arr[i], "var", p), p + "var");
            const std::size_t val = count(require(arr[i], "val", p), p + "val");
            if (val > 1) throw MalformedInput(p + "val", "value must be 0 or 1");
            lv.value = static_cast<std::uint8_t>(val);
            labeled.push_back(std::move(lv));
        }
    }
    return LowLevelProgram(target, num_vars, std::move(free), std::move(labeled),
                           optional_number(j, "tol", kDefaultTolerance));
}

HighLevelProgram high_level_from_json(const Json& j) {
    const Vector target = vector_from_json(require(j, "target"), "target");
    const std::size_t n = count(require(j, "n"), "n");
    if (static_cast<std::size_t>(target.size()) != n)
        throw MalformedInput("target", "expected length " + std::to_string(n));
    const std::size_t m = count(require(j, "m"), "m");
    Matrix free(static_cast<Eigen::Index>(n), 0);
    if (j.contains("free_basis")) free = columns_from_json(j["free_basis"], "free_basis", n);
    std::string domain;
    if (j.contains("domain")) {
        if (!j["domain"].is_string()) throw MalformedInput("domain", "expected a string");
        domain = j["domain"].get<std::string>();
    }
    return HighLevelProgram(target, m, std::move(free), std::move(domain),
                            optional_number(j, "tol", kDefaultTolerance));
}

RankTrialConfig rank_config_from_json(const Json& j) {
    if (!j.is_object()) throw MalformedInput("config", "expected an object");
    RankTrialConfig c;
    if (j.contains("n")) c.n = count(j["n"], "n");
    if (j.contains("m")) c.m = count(j["m"], "m");
    if (j.contains("r")) c.r = count(j["r"], "r");
    if (j.contains("L")) c.L = number(j["L"], "L");
    if (j.contains("trials")) c.trials = count(j["trials"], "trials");
    if (j.contains("master_seed")) c.master_seed = count(j["master_seed"], "master_seed");
    if (j.contains("tolerance")) c.tolerance = number(j["tolerance"], "tolerance");
    return c;
}

Json load_json(const std::string& path_or_inline, const std::string& field) {
    std::string text;
    const auto first = path_or_inline.find_first_not_of(" \t\r\n");
    if (first != std::string::npos &&
        (path_or_inline[first] == '[' || path_or_inline[first] == '{')) {
        text = path_or_inline;
    } else {
        std::ifstream in(path_or_inline);
        if (!in) throw MalformedInput(field, "cannot open '" + path_or_inline + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedInput(field, std::string("invalid JSON: ") + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

Json calibration_json() {
    Json out;
    out["seed"] = calibration::kSeed;
    out["delta"] = calibration::kDelta;
    out["delta_rank"] = calibration::kDeltaRank;
    out["rank_constant"] = calibration::kRankConstant;
    out["rank_negative_threshold"] = calibration::kRankNegativeThreshold;
    out["sparse_cols_constant"] = calibration::kSparseColsConstant;
    out["diag_loading_constant"] = calibration::kDiagLoadingConstant;
    out["threshold_constant"] = calibration::kThresholdConstant;
    return out;
}

}  // namespace spanforge
