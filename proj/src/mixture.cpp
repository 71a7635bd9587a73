#include "sbic/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "sbic/errors.hpp"
#include "sbic/parallel.hpp"
#include "sbic/table_io.hpp"

namespace sbic::mixture {

extern const char* const kGalaxiesCsv;  // generated from data/galaxies.csv

namespace {

constexpr double kMinResponsibility = 1e-10;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

struct Params {
  std::vector<double> weights, means, variances;
};

Params m_step(std::span<const double> data, const Eigen::MatrixXd& resp, double floor) {
  const auto k = static_cast<int>(resp.cols());
  const auto n = static_cast<double>(data.size());
  Params p;
  p.weights.resize(k);
  p.means.resize(k);
  p.variances.resize(k);
  for (int h = 0; h < k; ++h) {
    double mass = 0.0, first = 0.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
      mass += resp(t, h);
      first += resp(t, h) * data[t];
    }
    if (mass < kMinResponsibility) {
      throw DegenerateComponentError("component " + std::to_string(h) + " lost all responsibility");
    }
    const double mean = first / mass;
    double second = 0.0;
    for (std::size_t t = 0; t < data.size(); ++t) {
      const double d = data[t] - mean;
      second += resp(t, h) * d * d;
    }
    p.weights[h] = mass / n;
    p.means[h] = mean;
    p.variances[h] = std::max(floor, second / mass);
  }
  return p;
}

// Fills responsibilities and returns the log-likelihood.
double e_step(std::span<const double> data, const Params& p, Eigen::MatrixXd& resp) {
  const auto k = static_cast<int>(p.weights.size());
  std::vector<double> log_coef(k), inv_var(k);
  for (int h = 0; h < k; ++h) {
    log_coef[h] = std::log(p.weights[h]) - 0.5 * std::log(p.variances[h]) - kLogSqrt2Pi;
    inv_var[h] = 1.0 / p.variances[h];
  }
  double total = 0.0;
  std::vector<double> terms(k);
  for (std::size_t t = 0; t < data.size(); ++t) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < k; ++h) {
      const double d = data[t] - p.means[h];
      terms[h] = log_coef[h] - 0.5 * d * d * inv_var[h];
      peak = std::max(peak, terms[h]);
    }
    double sum = 0.0;
    for (int h = 0; h < k; ++h) {
      terms[h] = std::exp(terms[h] - peak);
      sum += terms[h];
    }
    for (int h = 0; h < k; ++h) resp(t, h) = terms[h] / sum;
    total += peak + std::log(sum);
  }
  return total;
}

MixtureFit to_fit(Params p, double loglik) {
  const auto k = p.weights.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (p.means[a] != p.means[b]) return p.means[a] < p.means[b];
    return p.variances[a] < p.variances[b];
  });
  MixtureFit fit;
  for (std::size_t idx : order) {
    fit.weights.push_back(p.weights[idx]);
    fit.means.push_back(p.means[idx]);
    fit.variances.push_back(p.variances[idx]);
  }
  fit.loglik = loglik;
  return fit;
}

}  // namespace

MixtureFit em_fit(std::span<const double> data, const Eigen::MatrixXd& init, double floor,
                  const EmOptions& options) {
  const auto k = static_cast<int>(init.cols());
  if (k < 1) throw DimensionError("mixture needs at least one component");
  if (data.size() < static_cast<std::size_t>(k)) throw DimensionError("fewer observations than components");
  if (init.rows() != static_cast<Eigen::Index>(data.size())) {
    throw DimensionError("membership matrix must have one row per observation");
  }
  if (!(floor > 0.0)) throw DimensionError("variance floor must be positive");

  Eigen::MatrixXd resp = init;
  MixtureFit best;
  double previous = -std::numeric_limits<double>::infinity();
  Params params;
  std::vector<double> trace;
  int iteration = 0;
  while (iteration < options.max_iterations) {
    ++iteration;
    params = m_step(data, resp, floor);
    const double ll = e_step(data, params, resp);
    trace.push_back(ll);
    if (!std::isfinite(ll)) throw NonFiniteError("mixture log-likelihood is not finite");
    const bool converged = ll - previous < options.tolerance;
    previous = ll;
    if (converged) break;
  }
  MixtureFit fit = to_fit(std::move(params), previous);
  fit.iterations = iteration;
  fit.trace = std::move(trace);
  return fit;
}

double mixture_loglik(std::span<const double> data, const MixtureFit& fit) {
  Eigen::MatrixXd resp(static_cast<Eigen::Index>(data.size()), fit.components());
  return e_step(data, Params{fit.weights, fit.means, fit.variances}, resp);
}

Eigen::MatrixXd random_membership_init(Eigen::Index n, int components, Rng& rng) {
  if (n < 1 || components < 1) throw DimensionError("membership matrix needs n >= 1 and i >= 1");
  std::exponential_distribution<double> expo(1.0);
  Eigen::MatrixXd out(n, components);
  for (Eigen::Index t = 0; t < n; ++t) {
    double sum = 0.0;
    for (int h = 0; h < components; ++h) {
      out(t, h) = expo(rng);
      sum += out(t, h);
    }
    out.row(t) /= sum;
  }
  return out;
}

double variance_floor(std::span<const double> data, double fraction) {
  if (data.empty()) throw EmptyError("no data");
  const double n = static_cast<double>(data.size());
  const double mean = std::accumulate(data.begin(), data.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  return fraction * ss / n;
}

MixtureProfile fit_mixture_profile(std::span<const double> data, int max_components, int restarts,
                                   double floor, std::uint64_t master_seed, unsigned threads) {
  if (restarts < 1) throw DimensionError("need at least one restart");
  if (max_components < 1) throw DimensionError("need at least one component");
  const auto n = static_cast<Eigen::Index>(data.size());

  MixtureProfile profile;
  profile.n = n;
  for (int k = 1; k <= max_components; ++k) {
    std::vector<MixtureFit> fits(restarts);
    std::vector<char> ok(restarts, 0);
    parallel_for(static_cast<std::size_t>(restarts), threads, [&](std::size_t r) {
      Rng rng = stream_rng(master_seed, {static_cast<std::uint64_t>(k), r});
      try {
        fits[r] = em_fit(data, random_membership_init(n, k, rng), floor);
        ok[r] = 1;
      } catch (const DegenerateComponentError&) {
      }
    });
    int best = -1;
    for (int r = 0; r < restarts; ++r) {
      if (!ok[r]) {
        ++profile.failed_restarts;
        continue;
      }
      if (best < 0 || fits[r].loglik > fits[best].loglik) best = r;
    }
    if (best < 0) {
      throw DegenerateComponentError("every restart degenerated for " + std::to_string(k) +
                                     " components");
    }
    if (!profile.fits.empty() && fits[best].loglik < profile.fits.back().loglik) {
      profile.nonmonotone.push_back(k);
    }
    profile.fits.push_back(std::move(fits[best]));
  }
  return profile;
}

SbicInput mixture_sbic_input(const MixtureProfile& profile) {
  const auto count = static_cast<int>(profile.fits.size());
  if (count < 1) throw DimensionError("empty mixture profile");
  std::vector<std::string> ids;
  std::vector<double> loglik;
  std::vector<std::int64_t> dims;
  CoefficientMatrix coefficients;
  for (int i = 1; i <= count; ++i) {
    ids.push_back("k" + std::to_string(i));
    loglik.push_back(profile.fits[i - 1].loglik);
    dims.push_back(3 * i - 1);
    for (int j = 1; j <= i; ++j) coefficients.set(i - 1, j - 1, mixture_lambda_bound(i, j));
  }
  return SbicInput::with_uniform_prior(ModelPoset::chain(std::move(ids)), std::move(loglik),
                                       profile.n, std::move(coefficients), std::move(dims));
}

std::vector<double> galaxies_dataset() {
  std::vector<double> out;
  for (const auto& row : parse_numeric_table(kGalaxiesCsv).rows) out.push_back(row.at(0) / 1000.0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace sbic::mixture
