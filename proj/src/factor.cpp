#include "sbic/factor.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sbic/errors.hpp"
#include "sbic/parallel.hpp"
#include "sbic/rrr.hpp"
#include "sbic/table_io.hpp"

namespace sbic::factor {
namespace {

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw DegenerateError("implied covariance is not positive definite");
  return llt;
}

double loglik_from(const Eigen::MatrixXd& S, std::int64_t n, const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const auto k = static_cast<double>(S.rows());
  const Eigen::MatrixXd l = llt.matrixL();
  const double log_det = 2.0 * l.diagonal().array().log().sum();
  const double trace = llt.solve(S).trace();
  return -0.5 * static_cast<double>(n) * (k * std::log(2.0 * std::numbers::pi) + log_det + trace);
}

void check_covariance(const Eigen::MatrixXd& S) {
  if (S.rows() != S.cols() || S.rows() < 1) throw DimensionError("covariance matrix must be square");
  if (!S.isApprox(S.transpose(), 1e-10)) throw NotPositiveDefiniteError("covariance matrix is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("covariance matrix is not positive definite");
}

FactorFit em_run(const Eigen::MatrixXd& S, std::int64_t n, Eigen::MatrixXd loadings,
                 Eigen::VectorXd psi, const Eigen::VectorXd& floor, const FactorOptions& options) {
  const Eigen::Index q = loadings.cols();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(q, q);

  FactorFit fit;
  Eigen::MatrixXd sigma = loadings * loadings.transpose();
  sigma.diagonal() += psi;
  auto llt = factorize(sigma);
  double previous = loglik_from(S, n, llt);
  fit.trace.push_back(previous);

  int iteration = 0;
  while (iteration < options.max_iterations) {
    ++iteration;
    // beta = L^T Sigma^{-1}; the second moment of the factors given the data.
    const Eigen::MatrixXd beta = llt.solve(loadings).transpose();
    const Eigen::MatrixXd beta_s = beta * S;
    const Eigen::MatrixXd second = eye - beta * loadings + beta_s * beta.transpose();
    loadings = second.ldlt().solve(beta_s).transpose();
    psi = (S.diagonal() - (loadings.cwiseProduct(beta_s.transpose())).rowwise().sum()).cwiseMax(floor);

    sigma = loadings * loadings.transpose();
    sigma.diagonal() += psi;
    llt = factorize(sigma);
    const double ll = loglik_from(S, n, llt);
    if (!std::isfinite(ll)) throw NonFiniteError("factor log-likelihood is not finite");
    fit.trace.push_back(ll);
    const bool converged = ll - previous < options.tolerance;
    previous = ll;
    if (converged) break;
  }
  fit.loadings = std::move(loadings);
  fit.uniquenesses = std::move(psi);
  fit.loglik = previous;
  fit.iterations = iteration;
  return fit;
}

}  // namespace

Eigen::MatrixXd FactorFit::covariance() const {
  Eigen::MatrixXd sigma = loadings * loadings.transpose();
  sigma.diagonal() += uniquenesses;
  return sigma;
}

double fa_loglik(const Eigen::MatrixXd& S, std::int64_t n, const Eigen::MatrixXd& loadings,
                 const Eigen::VectorXd& uniquenesses) {
  Eigen::MatrixXd sigma = loadings * loadings.transpose();
  sigma.diagonal() += uniquenesses;
  return loglik_from(S, n, factorize(sigma));
}

FactorFit fa_fit(const Eigen::MatrixXd& S, std::int64_t n, int factors, std::uint64_t seed,
                 const FactorOptions& options, unsigned threads) {
  check_covariance(S);
  const Eigen::Index k = S.rows();
  if (factors < 0) throw RangeError("number of factors must be nonnegative");
  if (fa_model_dimension(static_cast<int>(k), factors) > k * (k + 1) / 2 + k) {
    throw RangeError("too many factors for " + std::to_string(k) + " variables");
  }
  if (factors > k) throw RangeError("more factors than variables");
  const Eigen::VectorXd floor = options.floor_fraction * S.diagonal();

  if (factors == 0) {
    FactorFit fit;
    fit.loadings = Eigen::MatrixXd::Zero(k, 0);
    fit.uniquenesses = S.diagonal().cwiseMax(floor);
    fit.loglik = fa_loglik(S, n, fit.loadings, fit.uniquenesses);
    fit.trace = {fit.loglik};
    return fit;
  }

  if (options.restarts < 1) throw RangeError("need at least one restart");
  const Eigen::VectorXd sd = S.diagonal().cwiseSqrt();
  std::vector<FactorFit> runs(options.restarts);
  std::vector<char> ok(options.restarts, 0);
  parallel_for(static_cast<std::size_t>(options.restarts), threads, [&](std::size_t r) {
    Rng rng = stream_rng(seed, {static_cast<std::uint64_t>(factors), r});
    const Eigen::MatrixXd q = rrr::haar_orthogonal(static_cast<int>(k), rng).leftCols(factors);
    try {
      runs[r] = em_run(S, n, sd.asDiagonal() * q, S.diagonal(), floor, options);
      ok[r] = 1;
    } catch (const DegenerateError&) {
    }
  });
  int best = -1;
  for (int r = 0; r < options.restarts; ++r) {
    if (ok[r] && (best < 0 || runs[r].loglik > runs[best].loglik)) best = r;
  }
  if (best < 0) throw DegenerateError("every factor-analysis restart degenerated");
  return std::move(runs[best]);
}

std::vector<FactorFit> fit_factor_profile(const Eigen::MatrixXd& S, std::int64_t n, int max_factors,
                                          std::uint64_t seed, const FactorOptions& options,
                                          unsigned threads) {
  std::vector<FactorFit> out;
  for (int i = 0; i <= max_factors; ++i) out.push_back(fa_fit(S, n, i, seed, options, threads));
  return out;
}

SbicInput fa_sbic_input(const std::vector<FactorFit>& profile, std::int64_t n) {
  if (profile.empty()) throw RangeError("empty factor profile");
  const auto count = static_cast<int>(profile.size());
  if (count > 4) throw RangeError("coefficient table covers at most three factors");
  std::vector<std::string> ids;
  std::vector<double> loglik;
  std::vector<std::int64_t> dims;
  CoefficientMatrix coefficients;
  for (int i = 0; i < count; ++i) {
    if (profile[i].uniquenesses.size() != 6) {
      throw RangeError("coefficient table covers six observed variables only; got " +
                       std::to_string(profile[i].uniquenesses.size()));
    }
    if (profile[i].factors() != i) throw RangeError("profile entry " + std::to_string(i) + " has wrong factor count");
    ids.push_back("f" + std::to_string(i));
    loglik.push_back(profile[i].loglik);
    dims.push_back(fa_model_dimension(6, i));
    for (int j = 0; j <= i; ++j) coefficients.set(i, j, fa_learning_coefficient(i, j));
  }
  return SbicInput::with_uniform_prior(ModelPoset::chain(std::move(ids)), std::move(loglik), n,
                                       std::move(coefficients), std::move(dims));
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& observations) {
  if (observations.rows() < 2) throw DimensionError("need at least two observations");
  const Eigen::RowVectorXd mean = observations.colwise().mean();
  const Eigen::MatrixXd centered = observations.rowwise() - mean;
  return centered.transpose() * centered / static_cast<double>(observations.rows());
}

namespace {

Eigen::MatrixXd table_to_matrix(const NumericTable& t) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(t.column_count()));
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = t.rows[r][c];
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd read_observations(const std::string& path) {
  return table_to_matrix(read_numeric_table(path));
}

Eigen::MatrixXd read_covariance(const std::string& path) {
  Eigen::MatrixXd S = table_to_matrix(read_numeric_table(path));
  if (S.rows() != S.cols()) throw IoError("covariance file '" + path + "' is not square");
  return S;
}

}  // namespace sbic::factor
