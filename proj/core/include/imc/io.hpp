#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "imc/classify.hpp"
#include "imc/iteration.hpp"
#include "imc/model.hpp"

namespace imc {

struct ParsedModel {
    ImpreciseChain chain;
    TargetSet target;
    std::string digest;  // canonical content hash, stable under key reordering
};

/// Loads and validates a model file:
///   { "states": [..labels..], "target": [..labels..],
///     "rows": { label: {"vertices": [[..]..]}
///             | {"intervals": {"lower": [..], "upper": [..]}} } }
/// Raises ParseError for structural problems and ValidationError with the
/// aggregated violation list for semantic ones.
ParsedModel parse_model(const std::filesystem::path& path);
ParsedModel parse_model_json(const nlohmann::json& doc);

nlohmann::json model_to_json(const ImpreciseChain& chain, const TargetSet& target);

/// FNV-1a over the canonical (sorted-key) dump.
std::string canonical_digest(const nlohmann::json& doc);

/// Values keyed by state label; +inf encodes as the string "inf".
nlohmann::json values_to_json(const StateSpace& states, const ExtVector& values);
nlohmann::json classification_to_json(const StateSpace& states,
                                      const ClassificationReport& report);
nlohmann::json matrix_to_json(const TransitionMatrix& T);

/// CSV trace export: header "iteration,state,value,delta,residual", one row
/// per stored snapshot and state, 17 significant digits, "inf" literal for
/// infinite values, LF line endings.
void emit_trace(const IterationTrace& trace, const StateSpace& states,
                const std::filesystem::path& path);

/// Command dispatch for the CLI. Exit codes: 0 success, 1 not converged,
/// 2 parse/validation failure, 3 oracle disagreement beyond tolerance,
/// 4 internal error.
int run_command(const std::vector<std::string>& args);
int run_command(int argc, char** argv);

}  // namespace imc
