#include "sbic/learning_coefficients.hpp"

#include <algorithm>
#include <array>

#include "sbic/errors.hpp"

namespace sbic {

const LearningCoefficient& CoefficientMatrix::at(ModelIndex i, ModelIndex j) const {
  const auto it = entries_.find({i, j});
  if (it == entries_.end()) {
    throw ValidationError("no learning coefficient for pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + ")");
  }
  return it->second;
}

std::optional<LearningCoefficient> CoefficientMatrix::find(ModelIndex i, ModelIndex j) const {
  const auto it = entries_.find({i, j});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

LearningCoefficient rrr_learning_coefficient(int N, int M, int i, int j) {
  if (N < 1 || M < 1) throw RankRangeError("matrix dimensions must be positive");
  if (j < 0 || j > i || i > std::min(N, M)) {
    throw RankRangeError("ranks must satisfy 0 <= j <= i <= min(N, M); got i=" + std::to_string(i) +
                         ", j=" + std::to_string(j));
  }
  const std::int64_t n = N, m = M, h = i, r = j;
  if (m + h <= n + r) return {Rational(h * m + r * (n - h), 2), 1};
  if (n + h <= m + r) return {Rational(h * n + r * (m - h), 2), 1};

  const std::int64_t base = 2 * (h + r) * (m + n) - (m - n) * (m - n) - (h + r) * (h + r);
  if ((m + n + h + r) % 2 == 0) return {Rational(base, 8), 1};
  return {Rational(base + 1, 8), 2};
}

std::int64_t rrr_model_dimension(int N, int M, int i) {
  if (i < 0 || i > std::min(N, M)) throw RankRangeError("rank out of range: " + std::to_string(i));
  return static_cast<std::int64_t>(i) * (N + M - i);
}

LearningCoefficient fa_learning_coefficient(int i, int j) {
  static const std::array<std::array<Rational, 4>, 4> table{{
      {Rational(3), Rational(), Rational(), Rational()},
      {Rational(9, 2), Rational(6), Rational(), Rational()},
      {Rational(6), Rational(29, 4), Rational(17, 2), Rational()},
      {Rational(15, 2), Rational(17, 2), Rational(19, 2), Rational(21, 2)},
  }};
  if (i < 0 || i > 3 || j < 0 || j > i) {
    throw RangeError("factor-analysis coefficients are tabulated for 0 <= j <= i <= 3 only; got i=" +
                     std::to_string(i) + ", j=" + std::to_string(j));
  }
  return {table[i][j], 1};
}

std::int64_t fa_model_dimension(int k, int i) {
  if (k < 1 || i < 0) throw RangeError("factor model needs k >= 1 variables and i >= 0 factors");
  const std::int64_t kk = k, ii = i;
  if (ii * (ii - 1) / 2 > kk * (ii + 1)) throw RangeError("too many factors for k variables");
  return kk * (ii + 1) - ii * (ii - 1) / 2;
}

LearningCoefficient mixture_lambda_bound(int i, int j) {
  if (j < 1 || j > i) {
    throw RangeError("mixture bound needs 1 <= j <= i; got i=" + std::to_string(i) +
                     ", j=" + std::to_string(j));
  }
  const Rational bound((i - 1) + 2 * j, 2);
  const Rational half_dim(3 * i - 1, 2);
  return {std::min(bound, half_dim), 1};
}

ValidationReport validate_matrix(const ModelPoset& poset, const CoefficientMatrix& coefficients,
                                 const std::vector<std::int64_t>& dims) {
  ValidationReport report;
  const auto pair_name = [&](ModelIndex i, ModelIndex j) {
    return "(i=" + poset.label(i) + ", j=" + poset.label(j) + ")";
  };
  if (dims.size() != poset.size()) {
    report.errors.push_back("dimension list has " + std::to_string(dims.size()) +
                            " entries for " + std::to_string(poset.size()) + " models");
    return report;
  }

  for (const auto& [key, coef] : coefficients.entries()) {
    const auto [i, j] = key;
    if (i >= poset.size() || j >= poset.size() || !poset.leq(j, i)) {
      report.errors.push_back("unexpected coefficient for pair (" + std::to_string(i) + ", " +
                              std::to_string(j) + ") which is not in the order relation");
    }
  }

  for (ModelIndex i = 0; i < poset.size(); ++i) {
    const Rational half_dim(dims[i], 2);
    const std::int64_t max_mult = std::max<std::int64_t>(1, dims[i]);
    for (ModelIndex j : poset.down_set(i)) {
      const auto c = coefficients.find(i, j);
      if (!c) {
        report.errors.push_back("missing coefficient for pair " + pair_name(i, j));
        continue;
      }
      if (c->lambda < Rational(0) || c->lambda > half_dim) {
        report.errors.push_back("lambda " + c->lambda.to_string() + " for pair " + pair_name(i, j) +
                                " outside [0, " + half_dim.to_string() + "]");
      }
      if (c->multiplicity < 1 || c->multiplicity > max_mult) {
        report.errors.push_back("multiplicity " + std::to_string(c->multiplicity) + " for pair " +
                                pair_name(i, j) + " outside {1, ..., " + std::to_string(max_mult) +
                                "}");
      }
    }
    const auto diag = coefficients.find(i, i);
    for (ModelIndex j : poset.down_set(i)) {
      const auto cj = coefficients.find(i, j);
      if (!cj) continue;
      if (diag && cj->lambda > diag->lambda) {
        report.warnings.push_back("lambda for pair " + pair_name(i, j) +
                                  " exceeds the diagonal entry " + pair_name(i, i));
      }
      for (ModelIndex l : poset.down_set(i)) {
        if (l == j || !poset.leq(j, l)) continue;
        const auto cl = coefficients.find(i, l);
        if (cl && cj->lambda > cl->lambda) {
          report.warnings.push_back("lambda decreases from " + pair_name(i, j) + " to " +
                                    pair_name(i, l));
        }
      }
    }
  }
  return report;
}

}  // namespace sbic
