#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sbic/poset.hpp"
#include "sbic/rational.hpp"

namespace sbic {

/// Exponent pair governing n^{-lambda} (log n)^{multiplicity-1}.
struct LearningCoefficient {
  Rational lambda;
  int multiplicity = 1;

  friend bool operator==(const LearningCoefficient&, const LearningCoefficient&) = default;
};

/// Coefficients (lambda_ij, m_ij) for every pair j ⪯ i of a model poset.
class CoefficientMatrix {
 public:
  void set(ModelIndex i, ModelIndex j, LearningCoefficient c) { entries_[{i, j}] = c; }

  const LearningCoefficient& at(ModelIndex i, ModelIndex j) const;
  std::optional<LearningCoefficient> find(ModelIndex i, ModelIndex j) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<std::pair<ModelIndex, ModelIndex>, LearningCoefficient>& entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<ModelIndex, ModelIndex>, LearningCoefficient> entries_;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  bool ok() const { return errors.empty(); }
};

// Reduced-rank regression with an N x M coefficient matrix. Model rank i,
// true rank j.
LearningCoefficient rrr_learning_coefficient(int N, int M, int i, int j);
std::int64_t rrr_model_dimension(int N, int M, int i);

// Factor analysis on six observed variables with up to three factors.
// Means are excluded from both the coefficients and the dimension.
LearningCoefficient fa_learning_coefficient(int i, int j);
std::int64_t fa_model_dimension(int k, int i);

/// Upper bound for univariate Gaussian mixtures with unequal variances,
/// capped at dim/2 = (3i-1)/2. Multiplicity is always 1.
LearningCoefficient mixture_lambda_bound(int i, int j);

/// Checks coverage of every j ⪯ i pair, lambda in [0, d_i/2] and
/// multiplicity in {1, ..., max(1, d_i)}; monotonicity violations along each
/// row are reported as warnings.
ValidationReport validate_matrix(const ModelPoset& poset, const CoefficientMatrix& coefficients,
                                 const std::vector<std::int64_t>& dims);

}  // namespace sbic
