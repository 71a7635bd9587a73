#pragma once

// Random generators of valid solver inputs shared by the unit and acceptance
// suites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sbic/solver.hpp"

namespace sbic::testing {

enum class Shape { kChain, kDiamond, kRandomDag };

inline ModelPoset random_poset(Shape shape, std::size_t size, std::mt19937_64& rng) {
  std::vector<std::pair<ModelIndex, ModelIndex>> covers;
  switch (shape) {
    case Shape::kChain:
      for (ModelIndex k = 1; k < size; ++k) covers.emplace_back(k - 1, k);
      break;
    case Shape::kDiamond:
      // Stacked diamonds: 0 below {1, 2} below 3 below {4, 5} below 6 ...
      for (ModelIndex top = 3; top < size + 3; top += 3) {
        const ModelIndex base = top - 3;
        for (ModelIndex mid : {base + 1, base + 2}) {
          if (mid < size) covers.emplace_back(base, mid);
          if (mid < size && top < size) covers.emplace_back(mid, top);
        }
      }
      break;
    case Shape::kRandomDag: {
      std::bernoulli_distribution edge(0.35);
      for (ModelIndex b = 1; b < size; ++b) {
        for (ModelIndex a = 0; a < b; ++a) {
          if (edge(rng)) covers.emplace_back(a, b);
        }
      }
      break;
    }
  }
  return ModelPoset::build(size, covers);
}

struct InputOptions {
  bool regular = false;   ///< lambda_ij = d_i/2 and m_ij = 1 everywhere
  bool uniform_prior = false;
};

/// Valid SbicInput over the given poset: dims grow along the order, lambda_ii
/// = d_i/2, off-diagonal lambdas are quarter-integers in [0, d_i/2].
inline SbicInput random_input(ModelPoset poset, std::mt19937_64& rng, InputOptions opt = {}) {
  const std::size_t size = poset.size();
  std::uniform_int_distribution<int> dim_step(1, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> sample_size(3, 20000);
  std::uniform_int_distribution<int> mult(1, 3);

  std::vector<std::int64_t> dims(size, 0);
  for (ModelIndex i : poset.linear_extension()) {
    std::int64_t d = dim_step(rng);
    for (ModelIndex j : poset.down_set(i)) {
      if (j != i) d = std::max(d, dims[j] + dim_step(rng));
    }
    dims[i] = d;
  }

  const std::int64_t n = sample_size(rng);
  std::vector<double> loglik(size);
  const double base = -5000.0 * unit(rng);
  for (ModelIndex i = 0; i < size; ++i) {
    loglik[i] = base + 0.5 * static_cast<double>(dims[i]) * std::log(static_cast<double>(n)) * 1.5 * unit(rng);
  }

  CoefficientMatrix coefficients;
  for (ModelIndex i = 0; i < size; ++i) {
    const std::int64_t quarter_max = 2 * dims[i];  // d_i/2 in quarters
    for (ModelIndex j : poset.down_set(i)) {
      if (opt.regular || j == i) {
        coefficients.set(i, j, {Rational(dims[i], 2), 1});
        continue;
      }
      std::uniform_int_distribution<std::int64_t> quarters(0, quarter_max);
      const int m = static_cast<int>(std::min<std::int64_t>(mult(rng), dims[i]));
      coefficients.set(i, j, {Rational(quarters(rng), 4), std::max(1, m)});
    }
  }

  std::vector<double> prior(size, 1.0);
  if (!opt.uniform_prior) {
    for (double& p : prior) p = 0.05 + 3.0 * unit(rng);
  }
  return SbicInput{std::move(poset), std::move(loglik), n, std::move(coefficients),
                   std::move(prior), std::move(dims)};
}

inline SbicInput random_input(std::mt19937_64& rng, InputOptions opt = {}) {
  std::uniform_int_distribution<int> shape_pick(0, 2);
  std::uniform_int_distribution<std::size_t> size_pick(1, 12);
  const auto shape = static_cast<Shape>(shape_pick(rng));
  return random_input(random_poset(shape, size_pick(rng), rng), rng, opt);
}

}  // namespace sbic::testing
