#include "sbic/rrr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sbic/errors.hpp"
#include "sbic/table_io.hpp"

namespace sbic::rrr {
namespace {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd out(rows, cols);
  // Fill column-major in a fixed order so streams are reproducible.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = normal(rng);
  }
  return out;
}

Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows,
                               const std::vector<std::size_t>& columns) {
  // Observations are rows in the file and columns in RrrData.
  Eigen::MatrixXd out(static_cast<Eigen::Index>(columns.size()),
                      static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = rows[r][columns[c]];
    }
  }
  return out;
}

void check_data(const RrrData& data) {
  if (data.y1.cols() != data.y2.cols()) throw DimensionError("y1 and y2 have different sample counts");
  if (data.n() < 1) throw DimensionError("no observations");
  if (data.y1.hasNaN() || data.y2.hasNaN()) throw DimensionError("data contain NaN entries");
}

}  // namespace

Eigen::MatrixXd haar_orthogonal(int n, Rng& rng) {
  const Eigen::MatrixXd z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < n; ++k) {
    if (r(k, k) < 0.0) q.col(k) *= -1.0;
  }
  return q;
}

Eigen::MatrixXd simulate_coefficient_matrix(int N, int M, const std::vector<double>& singular_values,
                                            Rng& rng) {
  const auto r = static_cast<int>(singular_values.size());
  if (N < 1 || M < 1 || r > std::min(N, M)) {
    throw DimensionError("need at most min(N, M) singular values");
  }
  for (std::size_t k = 0; k < singular_values.size(); ++k) {
    if (!(singular_values[k] > 0.0) || (k > 0 && singular_values[k] > singular_values[k - 1])) {
      throw DimensionError("singular values must be positive and nonincreasing");
    }
  }
  const Eigen::MatrixXd u = haar_orthogonal(N, rng);
  const Eigen::MatrixXd v = haar_orthogonal(M, rng);
  const Eigen::VectorXd s = Eigen::Map<const Eigen::VectorXd>(singular_values.data(), r);
  return u.leftCols(r) * s.asDiagonal() * v.leftCols(r).transpose();
}

RrrData simulate_data(const Eigen::MatrixXd& pi, Eigen::Index n, Rng& rng) {
  RrrData data;
  data.y2 = gaussian_matrix(pi.cols(), n, rng);
  data.y1 = pi * data.y2 + gaussian_matrix(pi.rows(), n, rng);
  return data;
}

double joint_loglik(const RrrData& data, const Eigen::MatrixXd& pi) {
  const double n = static_cast<double>(data.n());
  const double dim = static_cast<double>(data.y1.rows() + data.y2.rows());
  const double rss = (data.y1 - pi * data.y2).squaredNorm();
  return -0.5 * rss - 0.5 * data.y2.squaredNorm() - 0.5 * n * dim * std::log(2.0 * std::numbers::pi);
}

RrrProfile fit_profile(const RrrData& data, int max_rank) {
  check_data(data);
  const auto N = static_cast<int>(data.y1.rows());
  const auto M = static_cast<int>(data.y2.rows());
  if (max_rank < 0 || max_rank > std::min(N, M)) throw RankRangeError("max rank out of range");
  if (data.n() < M) throw SingularDesignError("need at least M observations");

  const Eigen::MatrixXd gram = data.y2 * data.y2.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd evals = eig.eigenvalues();
  if (!(evals.minCoeff() > 0.0) || evals.maxCoeff() / evals.minCoeff() > 1e12) {
    throw SingularDesignError("Y2 Y2^T is numerically singular");
  }
  const Eigen::VectorXd root = evals.cwiseMax(1e-12).cwiseSqrt();
  const Eigen::MatrixXd& vecs = eig.eigenvectors();
  const Eigen::MatrixXd sqrt_gram = vecs * root.asDiagonal() * vecs.transpose();
  const Eigen::MatrixXd inv_sqrt_gram = vecs * root.cwiseInverse().asDiagonal() * vecs.transpose();

  const Eigen::MatrixXd ols = (data.y1 * data.y2.transpose()) * gram.ldlt().solve(Eigen::MatrixXd::Identity(M, M));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(ols * sqrt_gram, Eigen::ComputeThinU | Eigen::ComputeThinV);

  RrrProfile profile;
  profile.N = N;
  profile.M = M;
  profile.n = data.n();
  Eigen::MatrixXd partial = Eigen::MatrixXd::Zero(N, M);
  for (int rank = 0; rank <= max_rank; ++rank) {
    if (rank > 0) {
      const Eigen::Index k = rank - 1;
      partial += svd.singularValues()(k) * svd.matrixU().col(k) * svd.matrixV().col(k).transpose();
    }
    Eigen::MatrixXd pi_hat = partial * inv_sqrt_gram;
    profile.loglik.push_back(joint_loglik(data, pi_hat));
    profile.fitted.push_back(std::move(pi_hat));
  }
  return profile;
}

SbicInput rrr_sbic_input(const RrrProfile& profile) {
  const int ranks = profile.max_rank() + 1;
  std::vector<std::string> ids;
  std::vector<std::int64_t> dims;
  for (int i = 0; i < ranks; ++i) {
    ids.push_back("rank" + std::to_string(i));
    dims.push_back(rrr_model_dimension(profile.N, profile.M, i));
  }
  CoefficientMatrix coefficients;
  for (int i = 0; i < ranks; ++i) {
    for (int j = 0; j <= i; ++j) {
      coefficients.set(i, j, rrr_learning_coefficient(profile.N, profile.M, i, j));
    }
  }
  return SbicInput::with_uniform_prior(ModelPoset::chain(std::move(ids)), profile.loglik, profile.n,
                                       std::move(coefficients), std::move(dims));
}

RrrData read_csv(const std::string& y1_path, const std::string& y2_path) {
  const NumericTable t1 = read_numeric_table(y1_path);
  const NumericTable t2 = read_numeric_table(y2_path);
  std::vector<std::size_t> c1(t1.column_count()), c2(t2.column_count());
  for (std::size_t k = 0; k < c1.size(); ++k) c1[k] = k;
  for (std::size_t k = 0; k < c2.size(); ++k) c2[k] = k;
  RrrData data{rows_to_matrix(t1.rows, c1), rows_to_matrix(t2.rows, c2)};
  check_data(data);
  return data;
}

RrrData read_csv(const std::string& combined_path) {
  const NumericTable t = read_numeric_table(combined_path);
  std::vector<std::size_t> c1, c2;
  for (std::size_t k = 0; k < t.columns.size(); ++k) {
    if (t.columns[k].starts_with("y1_")) c1.push_back(k);
    else if (t.columns[k].starts_with("y2_")) c2.push_back(k);
  }
  if (c1.empty() || c2.empty()) {
    throw IoError("'" + combined_path + "' needs header columns prefixed y1_ and y2_");
  }
  RrrData data{rows_to_matrix(t.rows, c1), rows_to_matrix(t.rows, c2)};
  check_data(data);
  return data;
}

}  // namespace sbic::rrr
