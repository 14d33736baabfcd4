#pragma once

// JSON and CSV formats for programs, inputs and experiment reports.
//
//   low-level:  {dim, num_vars, target, free: [[...]], labeled: [{vec, var, val}], tol?}
//   high-level: {n, m, target, free_basis: [[...]] (columns), domain?, tol?}
//   compiled:   low-level fields plus encoder {mode, k, k_nnz, l_nnz, variables, layout}
//   matrix:     [[row], [row], ...]
//   rank config {n, m, r, L, trials, master_seed, tolerance}
//
// Parsing failures throw MalformedInput naming the offending field.

#include "spanforge/compile.hpp"
#include "spanforge/highlevel.hpp"
#include "spanforge/rank_trials.hpp"
#include "spanforge/span_program.hpp"

#include <json.hpp>

#include <string>

namespace spanforge {

using Json = nlohmann::ordered_json;

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const LowLevelProgram& p);
Json to_json(const HighLevelProgram& p);
Json to_json(const CompiledProgram& c);
Json to_json(const RankTrialConfig& c);

Vector vector_from_json(const Json& j, const std::string& field);
Matrix matrix_from_json(const Json& j, const std::string& field);
LowLevelProgram low_level_from_json(const Json& j);
HighLevelProgram high_level_from_json(const Json& j);
RankTrialConfig rank_config_from_json(const Json& j);

/// Parses a file, or the argument itself when it starts with '[' or '{'.
Json load_json(const std::string& path_or_inline, const std::string& field);

/// %.17g; "inf" / "nan" for non-finite values.
std::string format_double(double v);

/// A number, or null when not finite.
Json number_or_null(double v);

/// Frozen calibration constants as a JSON object.
Json calibration_json();

}  // namespace spanforge
