#pragma once

#include <string>

#include <json.hpp>

#include "sbic/solver.hpp"

namespace sbic {

/// Parses a model-collection document:
///
///   { "models": [ {"id": "a", "loglik": -10.5, "dim": 3, "prior": 1.0}, ... ],
///     "order": [ ["a", "b"], ... ],          // cover pairs [child, parent]
///     "n": 143,
///     "coefficients": [ {"i": "b", "j": "a", "lambda": "3/2", "m": 1}, ... ] }
///
/// Missing priors default to 1 (uniform after normalization). Structural
/// problems throw SchemaError naming the key; an inconsistent order or
/// coefficient table throws ValidationError.
SbicInput parse_model_collection(const nlohmann::json& doc);
SbicInput read_model_collection(const std::string& path);

/// Serializes an input back into the document format above.
nlohmann::json model_collection_to_json(const SbicInput& input);

/// Rounds to 12 significant digits so JSON output is stable and compact.
double round_significant(double value, int digits = 12);

/// Per-model rows: id, loglik, bic, sbic, penalty, posterior_bic, posterior_sbic.
nlohmann::json result_to_json(const SbicInput& input, const SbicResult& result);
std::string result_to_csv(const SbicInput& input, const SbicResult& result);

}  // namespace sbic
