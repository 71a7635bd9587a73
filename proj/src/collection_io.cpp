#include "sbic/collection_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sbic/errors.hpp"

namespace sbic {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError("missing key '" + std::string(key) + "' in " + where);
  }
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw SchemaError("key '" + std::string(key) + "' in " + where + " must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError("key '" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

std::int64_t require_integer(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw SchemaError("key '" + std::string(key) + "' in " + where + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::string format12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

double round_significant(double value, int digits) {
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

SbicInput parse_model_collection(const json& doc) {
  if (!doc.is_object()) throw SchemaError("top-level document must be a JSON object");
  const json& models = require(doc, "models", "document");
  if (!models.is_array() || models.empty()) throw SchemaError("key 'models' must be a nonempty array");

  std::vector<std::string> ids;
  std::vector<double> loglik, prior;
  std::vector<std::int64_t> dims;
  for (std::size_t k = 0; k < models.size(); ++k) {
    const std::string where = "models[" + std::to_string(k) + "]";
    const json& m = models[k];
    if (!m.is_object()) throw SchemaError(where + " must be an object");
    ids.push_back(require_string(m, "id", where));
    loglik.push_back(require_number(m, "loglik", where));
    dims.push_back(require_integer(m, "dim", where));
    if (m.contains("prior")) {
      const double p = require_number(m, "prior", where);
      if (!(p > 0.0)) throw SchemaError("key 'prior' in " + where + " must be positive");
      prior.push_back(p);
    } else {
      prior.push_back(1.0);
    }
  }

  std::vector<std::pair<std::string, std::string>> covers;
  if (doc.contains("order")) {
    const json& order = doc.at("order");
    if (!order.is_array()) throw SchemaError("key 'order' must be an array of [child, parent] pairs");
    for (std::size_t k = 0; k < order.size(); ++k) {
      const json& pair = order[k];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
        throw SchemaError("key 'order' entry " + std::to_string(k) + " must be a [child, parent] pair of strings");
      }
      covers.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
  }

  const std::int64_t n = require_integer(doc, "n", "document");

  std::set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw ValidationError("duplicate model id '" + id + "'");
  }
  ModelPoset poset = [&] {
    try {
      return ModelPoset::build(ids, covers);
    } catch (const CycleError& e) {
      throw ValidationError(e.what());
    } catch (const UnknownIdError& e) {
      throw ValidationError(e.what());
    }
  }();

  const json& coefs = require(doc, "coefficients", "document");
  if (!coefs.is_array()) throw SchemaError("key 'coefficients' must be an array");
  CoefficientMatrix matrix;
  for (std::size_t k = 0; k < coefs.size(); ++k) {
    const std::string where = "coefficients[" + std::to_string(k) + "]";
    const json& c = coefs[k];
    if (!c.is_object()) throw SchemaError(where + " must be an object");
    const std::string i = require_string(c, "i", where);
    const std::string j = require_string(c, "j", where);
    const std::string lambda_text = require_string(c, "lambda", where);
    const std::int64_t m = require_integer(c, "m", where);
    Rational lambda;
    try {
      lambda = Rational::parse(lambda_text);
    } catch (const std::invalid_argument&) {
      throw SchemaError("key 'lambda' in " + where + " is not a rational 'p/q': '" + lambda_text + "'");
    }
    ModelIndex ii = 0, jj = 0;
    try {
      ii = poset.index_of(i);
      jj = poset.index_of(j);
    } catch (const UnknownIdError& e) {
      throw ValidationError(std::string(e.what()) + " in " + where);
    }
    if (matrix.find(ii, jj)) throw ValidationError("duplicate coefficient for pair (i=" + i + ", j=" + j + ")");
    matrix.set(ii, jj, {lambda, static_cast<int>(m)});
  }

  SbicInput input{std::move(poset), std::move(loglik), n, std::move(matrix), std::move(prior),
                  std::move(dims)};
  if (n < 3) throw ValidationError("sample size n must be at least 3, got " + std::to_string(n));
  const ValidationReport report = validate_matrix(input.poset, input.coefficients, input.dims);
  if (!report.ok()) throw ValidationError(report.errors.front());
  return input;
}

SbicInput read_model_collection(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_model_collection(doc);
}

json model_collection_to_json(const SbicInput& input) {
  json doc;
  doc["n"] = input.n;
  json models = json::array();
  for (ModelIndex i = 0; i < input.poset.size(); ++i) {
    models.push_back({{"id", input.poset.label(i)},
                      {"loglik", input.loglik[i]},
                      {"dim", input.dims[i]},
                      {"prior", input.prior[i]}});
  }
  doc["models"] = std::move(models);
  json order = json::array();
  for (ModelIndex a = 0; a < input.poset.size(); ++a) {
    for (ModelIndex b = 0; b < input.poset.size(); ++b) {
      if (input.poset.less(a, b)) order.push_back({input.poset.label(a), input.poset.label(b)});
    }
  }
  doc["order"] = std::move(order);
  json coefs = json::array();
  for (const auto& [key, c] : input.coefficients.entries()) {
    coefs.push_back({{"i", input.poset.label(key.first)},
                     {"j", input.poset.label(key.second)},
                     {"lambda", c.lambda.to_string()},
                     {"m", c.multiplicity}});
  }
  doc["coefficients"] = std::move(coefs);
  return doc;
}

json result_to_json(const SbicInput& input, const SbicResult& result) {
  json rows = json::array();
  for (ModelIndex i = 0; i < input.poset.size(); ++i) {
    rows.push_back({{"id", input.poset.label(i)},
                    {"loglik", round_significant(input.loglik[i])},
                    {"bic", round_significant(result.bic[i])},
                    {"sbic", round_significant(result.sbic[i])},
                    {"penalty", round_significant(result.penalty[i])},
                    {"posterior_bic", round_significant(result.posterior_bic[i])},
                    {"posterior_sbic", round_significant(result.posterior_sbic[i])}});
  }
  return rows;
}

std::string result_to_csv(const SbicInput& input, const SbicResult& result) {
  std::ostringstream out;
  out << "id,loglik,bic,sbic,penalty,posterior_bic,posterior_sbic\n";
  for (ModelIndex i = 0; i < input.poset.size(); ++i) {
    out << input.poset.label(i) << ',' << format12(input.loglik[i]) << ',' << format12(result.bic[i])
        << ',' << format12(result.sbic[i]) << ',' << format12(result.penalty[i]) << ','
        << format12(result.posterior_bic[i]) << ',' << format12(result.posterior_sbic[i]) << '\n';
  }
  return out.str();
}

}  // namespace sbic
