#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "sbic/rng.hpp"
#include "sbic/solver.hpp"

namespace sbic::factor {

/// Sigma = L L^T + diag(psi) with means profiled out.
struct FactorFit {
  Eigen::MatrixXd loadings;      ///< k x i
  Eigen::VectorXd uniquenesses;  ///< k
  double loglik = 0.0;
  int iterations = 0;
  std::vector<double> trace;     ///< log-likelihood per EM iteration of the winning restart

  int factors() const { return static_cast<int>(loadings.cols()); }
  Eigen::MatrixXd covariance() const;
};

struct FactorOptions {
  double floor_fraction = 1e-4;  ///< uniqueness floor as a fraction of diag(S)
  int restarts = 50;
  double tolerance = 1e-9;
  int max_iterations = 5000;
};

/// -(n/2) [k ln 2 pi + ln det Sigma + tr(Sigma^{-1} S)].
double fa_loglik(const Eigen::MatrixXd& S, std::int64_t n, const Eigen::MatrixXd& loadings,
                 const Eigen::VectorXd& uniquenesses);

/// Maximum-likelihood fit with `factors` factors. Zero factors is solved in
/// closed form (psi = diag S); otherwise EM treating the factors as missing
/// data, best of options.restarts random starts keyed by (seed, factors,
/// restart).
FactorFit fa_fit(const Eigen::MatrixXd& S, std::int64_t n, int factors, std::uint64_t seed,
                 const FactorOptions& options = {}, unsigned threads = 1);

/// Fits 0..max_factors factors.
std::vector<FactorFit> fit_factor_profile(const Eigen::MatrixXd& S, std::int64_t n, int max_factors,
                                          std::uint64_t seed, const FactorOptions& options = {},
                                          unsigned threads = 1);

/// Chain f0 ⪯ f1 ⪯ ... with the tabulated six-variable coefficients. Throws
/// RangeError unless k = 6 and at most three factors.
SbicInput fa_sbic_input(const std::vector<FactorFit>& profile, std::int64_t n);

/// Sample covariance with denominator n; observations are rows.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& observations);

/// Observations (rows = cases) from a CSV file.
Eigen::MatrixXd read_observations(const std::string& path);

/// Square covariance matrix from a CSV file.
Eigen::MatrixXd read_covariance(const std::string& path);

}  // namespace sbic::factor
