#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "sbic/rng.hpp"
#include "sbic/solver.hpp"

namespace sbic::mixture {

/// Univariate Gaussian mixture with unequal variances. Components are sorted
/// by mean.
struct MixtureFit {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double loglik = 0.0;
  int iterations = 0;
  std::vector<double> trace;  ///< log-likelihood after every E-step

  int components() const { return static_cast<int>(weights.size()); }
};

struct EmOptions {
  double tolerance = 1e-8;
  int max_iterations = 1000;
};

/// EM from the given n x i membership matrix (rows on the simplex). The first
/// step is an M-step on those memberships. Variances are clamped at `floor`
/// in every M-step. Throws DegenerateComponentError when a component's total
/// responsibility drops below 1e-10.
MixtureFit em_fit(std::span<const double> data, const Eigen::MatrixXd& init, double floor,
                  const EmOptions& options = {});

/// Mixture log-likelihood of the data.
double mixture_loglik(std::span<const double> data, const MixtureFit& fit);

/// n x i matrix whose rows are independent uniform draws from the simplex.
Eigen::MatrixXd random_membership_init(Eigen::Index n, int components, Rng& rng);

inline constexpr double kDefaultFloorFraction = 1e-3;

/// `fraction` times the sample variance (denominator n).
double variance_floor(std::span<const double> data, double fraction = kDefaultFloorFraction);

struct MixtureProfile {
  std::vector<MixtureFit> fits;  ///< fits[k] has k + 1 components
  std::int64_t n = 0;
  int failed_restarts = 0;       ///< restarts abandoned as degenerate
  std::vector<int> nonmonotone;  ///< component counts whose best loglik fell below the previous count's
};

/// Best of `restarts` random-membership EM runs for every component count
/// 1..max_components. Restart r for count i draws from the stream keyed by
/// (master_seed, i, r), so results do not depend on `threads`.
MixtureProfile fit_mixture_profile(std::span<const double> data, int max_components, int restarts,
                                   double floor, std::uint64_t master_seed, unsigned threads = 1);

/// Chain 1 ⪯ 2 ⪯ ... ⪯ K with the plug-in mixture bounds, dims 3i - 1 and a
/// uniform prior. Models are labelled "k1", "k2", ...
SbicInput mixture_sbic_input(const MixtureProfile& profile);

/// The 82 galaxy velocities, sorted, in units of 1000 km/s.
std::vector<double> galaxies_dataset();

}  // namespace sbic::mixture
