#include "sbic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sbic/errors.hpp"

namespace sbic {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
  double peak = kNegInf;
  for (double x : xs) peak = std::max(peak, x);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - peak);
  return peak + std::log(sum);
}

void require_finite(double x, const char* what, ModelIndex i) {
  if (!std::isfinite(x)) {
    throw NonFiniteError(std::string("non-finite ") + what + " for model index " +
                         std::to_string(i));
  }
}

// Log of the positive root of x^2 + b x - c = 0, given b = sign_b * exp(log_abs_b)
// and c = exp(log_c). Both coefficients are rescaled by the larger of |b| and
// sqrt(c) so the quadratic has O(1) coefficients before any exponentiation.
double log_positive_root(int sign_b, double log_abs_b, double log_c) {
  const double log_scale = std::max(log_abs_b, 0.5 * log_c);
  const double beta = sign_b == 0 ? 0.0 : sign_b * std::exp(log_abs_b - log_scale);
  const double log_gamma = log_c - 2.0 * log_scale;
  const double gamma = std::exp(log_gamma);
  const double disc = std::sqrt(beta * beta + 4.0 * gamma);
  if (beta > 0.0) {
    // 2 gamma / (beta + disc), kept in logs since gamma may underflow.
    return log_scale + std::log(2.0) + log_gamma - std::log(beta + disc);
  }
  return log_scale + std::log(0.5 * (-beta + disc));
}

std::vector<double> log_normalized_prior(const SbicInput& input) {
  double total = 0.0;
  for (double w : input.prior) total += w;
  std::vector<double> out(input.prior.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::log(input.prior[k] / total);
  return out;
}

}  // namespace

SbicInput SbicInput::with_uniform_prior(ModelPoset poset, std::vector<double> loglik,
                                        std::int64_t n, CoefficientMatrix coefficients,
                                        std::vector<std::int64_t> dims) {
  const std::size_t size = poset.size();
  return SbicInput{std::move(poset),  std::move(loglik),         n,
                   std::move(coefficients), std::vector<double>(size, 1.0), std::move(dims)};
}

double log_lprime_ij_from_log_n(double loglik, double log_n, const LearningCoefficient& coef) {
  return loglik - coef.lambda.to_double() * log_n +
         static_cast<double>(coef.multiplicity - 1) * std::log(log_n);
}

double log_lprime_ij(double loglik, std::int64_t n, const LearningCoefficient& coef) {
  if (n < 3) throw SampleSizeError("sample size must be at least 3, got " + std::to_string(n));
  return log_lprime_ij_from_log_n(loglik, std::log(static_cast<double>(n)), coef);
}

double bic(const SbicInput& input, ModelIndex i) {
  if (i >= input.poset.size()) throw UnknownIdError("model index out of range");
  return input.loglik[i] -
         0.5 * static_cast<double>(input.dims[i]) * std::log(static_cast<double>(input.n));
}

void validate_input(const SbicInput& input) {
  const std::size_t size = input.poset.size();
  if (input.n < 3) {
    throw SampleSizeError("sample size must be at least 3, got " + std::to_string(input.n));
  }
  if (input.loglik.size() != size || input.prior.size() != size || input.dims.size() != size) {
    throw ValidationError("per-model vectors must have one entry per model");
  }
  for (ModelIndex i = 0; i < size; ++i) {
    if (!std::isfinite(input.loglik[i])) {
      throw NonFiniteError("log-likelihood of model '" + input.poset.label(i) + "' is not finite");
    }
    if (!(input.prior[i] > 0.0) || !std::isfinite(input.prior[i])) {
      throw ValidationError("prior weight of model '" + input.poset.label(i) +
                            "' must be positive and finite");
    }
  }
  const ValidationReport report = validate_matrix(input.poset, input.coefficients, input.dims);
  if (!report.ok()) throw ValidationError(report.errors.front());
}

SbicResult solve(const SbicInput& input) {
  validate_input(input);
  const std::size_t size = input.poset.size();
  const double log_n = std::log(static_cast<double>(input.n));
  const std::vector<double> log_prior = log_normalized_prior(input);

  SbicResult result;
  result.sbic.assign(size, 0.0);
  result.bic.resize(size);
  result.penalty.resize(size);

  for (ModelIndex i = 0; i < size; ++i) {
    for (ModelIndex j : input.poset.down_set(i)) {
      const double v = log_lprime_ij_from_log_n(input.loglik[i], log_n, input.coefficients.at(i, j));
      require_finite(v, "log L'_ij", i);
      result.log_lprime[{i, j}] = v;
    }
  }

  std::vector<double> weighted;   // log L'(M_j) + log P(M_j)/P(M_i), j ≺ i
  std::vector<double> products;   // log L'_ij + the same
  for (ModelIndex i : input.poset.linear_extension()) {
    const double log_lii = result.log_lprime.at({i, i});
    if (input.poset.is_minimal(i)) {
      result.sbic[i] = log_lii;
      continue;
    }
    weighted.clear();
    products.clear();
    for (ModelIndex j : input.poset.down_set(i)) {
      if (j == i) continue;
      const double w = result.sbic[j] + log_prior[j] - log_prior[i];
      weighted.push_back(w);
      products.push_back(result.log_lprime.at({i, j}) + w);
    }

    // b = -L'_ii + sum_j w_j, formed after shifting by the largest log term.
    double shift = log_lii;
    for (double w : weighted) shift = std::max(shift, w);
    double b_shifted = -std::exp(log_lii - shift);
    for (double w : weighted) b_shifted += std::exp(w - shift);
    const double log_c = log_sum_exp(products);
    require_finite(b_shifted, "b coefficient", i);
    require_finite(log_c, "c coefficient", i);

    const int sign_b = b_shifted > 0.0 ? 1 : (b_shifted < 0.0 ? -1 : 0);
    const double log_abs_b = sign_b == 0 ? kNegInf : shift + std::log(std::abs(b_shifted));
    const double root = log_positive_root(sign_b, log_abs_b, log_c);
    require_finite(root, "sBIC", i);
    result.sbic[i] = root;
  }

  for (ModelIndex i = 0; i < size; ++i) {
    result.bic[i] = input.loglik[i] - 0.5 * static_cast<double>(input.dims[i]) * log_n;
    result.penalty[i] = input.loglik[i] - result.sbic[i];
  }
  result.posterior_sbic = posterior_probabilities(result.sbic);
  result.posterior_bic = posterior_probabilities(result.bic);
  return result;
}

double residual(const SbicInput& input, const std::vector<double>& sbic) {
  const double log_n = std::log(static_cast<double>(input.n));
  const std::vector<double> log_prior = log_normalized_prior(input);
  double worst = 0.0;
  for (ModelIndex i = 0; i < input.poset.size(); ++i) {
    const auto down = input.poset.down_set(i);
    double shift = kNegInf;
    std::vector<double> lij(down.size());
    for (std::size_t k = 0; k < down.size(); ++k) {
      const ModelIndex j = down[k];
      lij[k] = log_lprime_ij_from_log_n(input.loglik[i], log_n, input.coefficients.at(i, j));
      shift = std::max(shift, std::max(sbic[i], lij[k]) + sbic[j] + log_prior[j]);
    }
    double numerator = 0.0;
    double denominator = 0.0;
    for (std::size_t k = 0; k < down.size(); ++k) {
      const ModelIndex j = down[k];
      const double weight = sbic[j] + log_prior[j] - shift;
      numerator += std::exp(sbic[i] + weight) - std::exp(lij[k] + weight);
      denominator += std::exp(sbic[i] + weight);
    }
    worst = std::max(worst, std::abs(numerator) / denominator);
  }
  return worst;
}

std::vector<double> fixed_point_oracle(const SbicInput& input, int iterations) {
  if (iterations < 1) throw Error("fixed-point oracle needs at least one iteration");
  validate_input(input);
  const std::size_t size = input.poset.size();
  const double log_n = std::log(static_cast<double>(input.n));
  const std::vector<double> log_prior = log_normalized_prior(input);

  std::vector<double> current(size);
  for (ModelIndex i = 0; i < size; ++i) {
    current[i] = log_lprime_ij_from_log_n(input.loglik[i], log_n, input.coefficients.at(i, i));
  }
  const std::vector<ModelIndex> order = input.poset.linear_extension();
  std::vector<double> num, den;
  for (int it = 0; it < iterations; ++it) {
    double change = 0.0;
    for (ModelIndex i : order) {
      num.clear();
      den.clear();
      for (ModelIndex j : input.poset.down_set(i)) {
        const double w = current[j] + log_prior[j];
        den.push_back(w);
        num.push_back(
            log_lprime_ij_from_log_n(input.loglik[i], log_n, input.coefficients.at(i, j)) + w);
      }
      const double update = log_sum_exp(num) - log_sum_exp(den);
      require_finite(update, "fixed-point iterate", i);
      change = std::max(change, std::abs(update - current[i]));
      // Undamped, the map is x -> c/x when the own term is negligible and
      // oscillates; averaging in the log domain keeps the fixed point.
      current[i] = 0.5 * (update + current[i]);
    }
    if (change <= 1e-10) return current;
  }
  throw NonConvergenceError("fixed-point iteration did not converge in " +
                            std::to_string(iterations) + " sweeps");
}

std::vector<double> posterior_probabilities(const std::vector<double>& scores) {
  if (scores.empty()) throw EmptyError("no scores to normalize");
  double peak = kNegInf;
  for (double s : scores) {
    if (!std::isfinite(s)) throw NonFiniteError("posterior probabilities need finite scores");
    peak = std::max(peak, s);
  }
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    out[k] = std::exp(scores[k] - peak);
    total += out[k];
  }
  for (double& p : out) p /= total;
  return out;
}

ModelIndex argmax(const std::vector<double>& scores) {
  if (scores.empty()) throw EmptyError("argmax of an empty score list");
  ModelIndex best = 0;
  for (ModelIndex k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

}  // namespace sbic
