#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "sbic/learning_coefficients.hpp"
#include "sbic/poset.hpp"

namespace sbic {

/// Everything needed to evaluate BIC and sBIC over a model poset. All
/// per-model vectors are indexed by ModelIndex.
struct SbicInput {
  ModelPoset poset;
  std::vector<double> loglik;     ///< maximized log-likelihood, natural log
  std::int64_t n = 0;             ///< sample size, at least 3
  CoefficientMatrix coefficients; ///< (lambda_ij, m_ij) for every j ⪯ i
  std::vector<double> prior;      ///< positive weights, normalized internally
  std::vector<std::int64_t> dims; ///< model dimensions for the BIC baseline

  /// Uniform prior and no coefficients; callers fill the rest.
  static SbicInput with_uniform_prior(ModelPoset poset, std::vector<double> loglik, std::int64_t n,
                                      CoefficientMatrix coefficients,
                                      std::vector<std::int64_t> dims);
};

struct SbicResult {
  std::vector<double> sbic;     ///< log L'(M_i)
  std::vector<double> bic;
  std::vector<double> penalty;  ///< loglik_i - sbic_i
  std::map<std::pair<ModelIndex, ModelIndex>, double> log_lprime;  ///< log L'_ij for j ⪯ i
  std::vector<double> posterior_sbic;
  std::vector<double> posterior_bic;
};

/// log L'_ij = loglik - lambda ln n + (m - 1) ln ln n.
double log_lprime_ij(double loglik, std::int64_t n, const LearningCoefficient& coef);

/// Same expression with ln n supplied directly; ln n must exceed 1.
double log_lprime_ij_from_log_n(double loglik, double log_n, const LearningCoefficient& coef);

double bic(const SbicInput& input, ModelIndex i);

/// Checks the SbicInput invariants; throws SampleSizeError, NonFiniteError or
/// ValidationError.
void validate_input(const SbicInput& input);

/// Solves the sBIC equation system one model at a time along a linear
/// extension of the poset, entirely in log scale.
SbicResult solve(const SbicInput& input);

/// Largest relative violation of the clearing-denominator equations
/// sum_{j ⪯ i} [L'(M_i) - L'_ij] L'(M_j) P(M_j) = 0, evaluated for the given
/// log L'(M_i) values.
double residual(const SbicInput& input, const std::vector<double>& sbic);
inline double residual(const SbicInput& input, const SbicResult& result) {
  return residual(input, result.sbic);
}

/// Fixed-point iteration of the weighted-average form of the system, started
/// at L'(M_i) = L'_ii, sweeping in linear-extension order with each update
/// averaged against the previous iterate in the log domain. Intended as an independent cross-check of
/// solve(). Throws NonConvergenceError if the largest log-scale change still
/// exceeds 1e-10 after `iterations` sweeps.
std::vector<double> fixed_point_oracle(const SbicInput& input, int iterations);

/// Softmax with max subtraction.
std::vector<double> posterior_probabilities(const std::vector<double>& scores);

/// Index of the largest score; ties go to the smaller index.
ModelIndex argmax(const std::vector<double>& scores);

}  // namespace sbic
