#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "sbic/rng.hpp"
#include "sbic/solver.hpp"

namespace sbic::rrr {

/// Observations stored column-wise: y1 is N x n (responses), y2 is M x n
/// (covariates).
struct RrrData {
  Eigen::MatrixXd y1;
  Eigen::MatrixXd y2;

  Eigen::Index n() const { return y1.cols(); }
};

/// Maximized log-likelihood and fitted coefficient matrix for ranks
/// 0..max_rank.
struct RrrProfile {
  std::vector<double> loglik;
  std::vector<Eigen::MatrixXd> fitted;
  int N = 0;
  int M = 0;
  std::int64_t n = 0;

  int max_rank() const { return static_cast<int>(loglik.size()) - 1; }
};

/// Haar-distributed orthogonal n x n matrix (QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q).
Eigen::MatrixXd haar_orthogonal(int n, Rng& rng);

/// U diag(s) V^T with U, V the leading columns of Haar orthogonal matrices.
Eigen::MatrixXd simulate_coefficient_matrix(int N, int M, const std::vector<double>& singular_values,
                                            Rng& rng);

/// y2 ~ N(0, I_M), y1 = pi y2 + N(0, I_N), n independent columns.
RrrData simulate_data(const Eigen::MatrixXd& pi, Eigen::Index n, Rng& rng);

/// Gaussian log-likelihood of the joint sample under E[y1 | y2] = pi y2 with
/// identity covariances.
double joint_loglik(const RrrData& data, const Eigen::MatrixXd& pi);

/// Reduced-rank maximum likelihood for every rank 0..max_rank via a truncated
/// SVD of C R, where C is the OLS coefficient and R = (Y2 Y2^T)^{1/2}.
RrrProfile fit_profile(const RrrData& data, int max_rank);

/// Chain 0 ⪯ 1 ⪯ ... ⪯ max_rank with the reduced-rank coefficients and
/// dimensions, uniform prior. Models are labelled "rank0", "rank1", ...
SbicInput rrr_sbic_input(const RrrProfile& profile);

/// Reads observations (rows = cases). Either two files holding y1 and y2, or
/// one file whose header marks columns with the prefixes y1_ and y2_.
RrrData read_csv(const std::string& y1_path, const std::string& y2_path);
RrrData read_csv(const std::string& combined_path);

}  // namespace sbic::rrr
