// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rrr_oracle.hpp"
#include "sbic/collection_io.hpp"
#include "sbic/errors.hpp"
#include "sbic/experiments.hpp"
#include "sbic/factor.hpp"
#include "sbic/learning_coefficients.hpp"
#include "sbic/mixture.hpp"
#include "sbic/rrr.hpp"
#include "sbic/solver.hpp"
#include "test_support.hpp"

namespace {

using namespace sbic;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Each check returns true on success and appends a short summary to `note`.
using Check = std::function<bool(std::ostringstream& note)>;

bool coefficient_golden(std::ostringstream& note) {
  const std::vector<std::vector<Rational>> table{
      {Rational(0)},
      {Rational(3, 2), Rational(7, 2)},
      {Rational(3), Rational(9, 2), Rational(6)},
      {Rational(9, 2), Rational(11, 2), Rational(13, 2), Rational(15, 2)}};
  const auto start = Clock::now();
  bool ok = true;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto c = rrr_learning_coefficient(5, 3, i, j);
      const int m = (i == 3 && j == 0) ? 2 : 1;
      ok = ok && c.lambda == table[i][j] && c.multiplicity == m;
    }
  }
  const double ms = 1e3 * seconds_since(start);
  note << "10 entries, " << ms << " ms";
  return ok && ms < 1.0;
}

bool fa_golden(std::ostringstream& note) {
  const std::vector<std::vector<Rational>> table{
      {Rational(3)},
      {Rational(9, 2), Rational(6)},
      {Rational(6), Rational(29, 4), Rational(17, 2)},
      {Rational(15, 2), Rational(17, 2), Rational(19, 2), Rational(21, 2)}};
  bool ok = true;
  for (int i = 0; i <= 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      const auto c = fa_learning_coefficient(i, j);
      ok = ok && c.lambda == table[i][j] && c.multiplicity == 1;
    }
  }
  const std::vector<std::int64_t> dims{fa_model_dimension(6, 0), fa_model_dimension(6, 1),
                                       fa_model_dimension(6, 2), fa_model_dimension(6, 3)};
  note << "dims " << dims[0] << "," << dims[1] << "," << dims[2] << "," << dims[3];
  return ok && dims == std::vector<std::int64_t>{6, 12, 17, 21};
}

bool regular_reduction(std::ostringstream& note) {
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<std::size_t> size_pick(1, 12);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t size = trial % 4 == 0 ? 1 : size_pick(rng);
    const auto in = testing::random_input(testing::random_poset(testing::Shape::kChain, size, rng), rng,
                                          {.regular = true});
    const auto res = solve(in);
    for (std::size_t i = 0; i < size; ++i) worst = std::max(worst, std::abs(res.sbic[i] - res.bic[i]));
  }
  note << "max |sBIC - BIC| = " << worst;
  return worst < 1e-10;
}

bool solver_correctness(std::ostringstream& note) {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<std::size_t> size_pick(1, 12);
  double worst_residual = 0.0, worst_oracle = 0.0, solve_seconds = 0.0;
  int compared = 0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto shape = trial % 2 ? testing::Shape::kDiamond : testing::Shape::kChain;
    const auto in = testing::random_input(testing::random_poset(shape, size_pick(rng), rng), rng);
    const auto start = Clock::now();
    const auto res = solve(in);
    const double r = residual(in, res);
    solve_seconds += seconds_since(start);
    worst_residual = std::max(worst_residual, r);
    for (std::size_t i = 0; i < in.poset.size(); ++i) {
      double lo = INFINITY, hi = -INFINITY;
      for (ModelIndex j : in.poset.down_set(i)) {
        lo = std::min(lo, res.log_lprime.at({i, j}));
        hi = std::max(hi, res.log_lprime.at({i, j}));
      }
      const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
      ok = ok && std::isfinite(res.sbic[i]) && res.sbic[i] >= lo - slack && res.sbic[i] <= hi + slack;
    }
    try {
      const auto oracle = fixed_point_oracle(in, 100000);
      ++compared;
      for (std::size_t i = 0; i < in.poset.size(); ++i) {
        worst_oracle = std::max(worst_oracle, std::abs(oracle[i] - res.sbic[i]));
      }
    } catch (const NonConvergenceError&) {
    }
  }
  note << "max residual " << worst_residual << ", oracle compared " << compared
       << "/100 max diff " << worst_oracle << ", solve time " << solve_seconds << " s";
  return ok && worst_residual < 1e-9 && worst_oracle < 1e-8 && solve_seconds < 1.0;
}

bool equivariance(std::ostringstream& note) {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> shift(-500.0, 500.0), scale(0.01, 100.0);
  double worst_shift = 0.0, worst_prior = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = testing::random_input(rng);
    const auto res = solve(in);
    auto shifted = in;
    const double c = shift(rng);
    for (double& l : shifted.loglik) l += c;
    const auto res_shift = solve(shifted);
    auto rescaled = in;
    const double s = scale(rng);
    for (double& p : rescaled.prior) p *= s;
    const auto res_prior = solve(rescaled);
    for (std::size_t i = 0; i < in.poset.size(); ++i) {
      worst_shift = std::max(worst_shift, std::abs(res_shift.sbic[i] - res.sbic[i] - c));
      worst_shift = std::max(worst_shift, std::abs(res_shift.bic[i] - res.bic[i] - c));
      worst_prior = std::max(worst_prior, std::abs(res_prior.sbic[i] - res.sbic[i]));
    }
  }
  note << "shift max err " << worst_shift << ", prior max err " << worst_prior;
  return worst_shift <= 1e-9 && worst_prior <= 1e-10;
}

experiments::SelectionFrequencies g_rank_run;

bool rank_reproduction(std::ostringstream& note) {
  using experiments::Criterion;
  experiments::ExperimentConfig cfg;
  cfg.replicates = 100;
  cfg.sample_sizes = {100, 150, 200, 300, 500};
  cfg.master_seed = 1;
  const auto start = Clock::now();
  g_rank_run = experiments::run_rrr_experiment(cfg, 1);
  const double secs = seconds_since(start);
  const auto& f = g_rank_run;
  const bool a = f.count(150, Criterion::kSbic, 4) > f.count(150, Criterion::kBic, 4);
  bool b = true, d = true;
  for (auto n : cfg.sample_sizes) {
    if (n <= 200) b = b && f.modal_rank(n, Criterion::kBic) <= 3;
    d = d && f.mean_rank(n, Criterion::kSbic) >= f.mean_rank(n, Criterion::kBic);
  }
  const bool c = f.modal_rank(500, Criterion::kBic) == 4 && f.modal_rank(500, Criterion::kSbic) == 4;
  note << "rank 4 at n=150: sBIC " << f.count(150, Criterion::kSbic, 4) << " vs BIC "
       << f.count(150, Criterion::kBic, 4) << "; BIC modal n=100/150/200: "
       << f.modal_rank(100, Criterion::kBic) << "/" << f.modal_rank(150, Criterion::kBic) << "/"
       << f.modal_rank(200, Criterion::kBic) << "; modal n=500: " << f.modal_rank(500, Criterion::kBic)
       << "/" << f.modal_rank(500, Criterion::kSbic) << "; checks a" << a << " b" << b << " c" << c
       << " d" << d << "; " << secs << " s single-threaded";
  return a && b && c && d && secs < 300.0;
}

bool entropy_trend(std::ostringstream& note) {
  using experiments::Criterion;
  const double h100 = experiments::entropy(g_rank_run.counts(100, Criterion::kSbic));
  const double h500 = experiments::entropy(g_rank_run.counts(500, Criterion::kSbic));
  note << "sBIC entropy n=100 " << h100 << ", n=500 " << h500;
  return h500 < h100;
}

bool galaxies(std::ostringstream& note) {
  const auto data = mixture::galaxies_dataset();
  const auto start = Clock::now();
  const auto profile =
      mixture::fit_mixture_profile(data, 10, 500, mixture::variance_floor(data), 20160621);
  const auto res = solve(mixture::mixture_sbic_input(profile));
  const double secs = seconds_since(start);
  const int best_bic = static_cast<int>(argmax(res.bic)) + 1;
  const int best_sbic = static_cast<int>(argmax(res.sbic)) + 1;
  double mass = 0.0;
  for (int k = 5; k <= 8; ++k) mass += res.posterior_sbic[k - 1];
  note << "BIC argmax " << best_bic << ", sBIC argmax " << best_sbic << ", sBIC mass on 5-8 " << mass
       << ", " << secs << " s";
  return best_bic == 3 && best_sbic >= 5 && best_sbic <= 7 && mass > 0.9 && secs < 180.0;
}

bool mle_oracles(std::ostringstream& note) {
  double worst_rrr = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(1000 + seed);
    const auto pi = rrr::simulate_coefficient_matrix(3, 2, {0.8}, rng);
    const auto data = rrr::simulate_data(pi, 50, rng);
    const auto profile = rrr::fit_profile(data, 2);
    worst_rrr = std::max(worst_rrr, std::abs(profile.loglik[1] - testing::rrr_gradient_oracle(data, 1, 20, seed)));
  }

  double worst_drop = 0.0;
  const auto track = [&](const std::vector<double>& trace) {
    for (std::size_t t = 1; t < trace.size(); ++t) worst_drop = std::max(worst_drop, trace[t - 1] - trace[t]);
  };
  const auto g = mixture::galaxies_dataset();
  int mixture_runs = 0;
  for (int k = 1; k <= 10; ++k) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng = stream_rng(seed, {static_cast<std::uint64_t>(k), 99});
      try {
        track(mixture::em_fit(g, mixture::random_membership_init(g.size(), k, rng), mixture::variance_floor(g)).trace);
        ++mixture_runs;
      } catch (const DegenerateComponentError&) {
      }
    }
  }
  int fa_runs = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Eigen::MatrixXd loadings = Eigen::MatrixXd::Random(6, 2);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(200, 6);
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
      Eigen::Vector2d z(normal(rng), normal(rng));
      Eigen::VectorXd e(6);
      for (int a = 0; a < 6; ++a) e(a) = 0.6 * normal(rng);
      x.row(t) = (loadings * z + e).transpose();
    }
    const auto S = factor::sample_covariance(x);
    for (int q = 1; q <= 3; ++q) {
      track(factor::fa_fit(S, 200, q, seed, {.restarts = 5}).trace);
      ++fa_runs;
    }
  }
  note << "RRR max |fit - oracle| " << worst_rrr << "; largest EM decrease " << worst_drop << " over "
       << mixture_runs << " mixture and " << fa_runs << " FA runs";
  return worst_rrr < 1e-6 && worst_drop <= 1e-8;
}

bool fa_pipeline(std::ostringstream& note) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> loglik(-5000.0, -100.0);
  std::uniform_int_distribution<std::int64_t> sample_size(3, 100000);
  double worst_sum = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    nlohmann::json doc;
    doc["n"] = sample_size(rng);
    doc["models"] = nlohmann::json::array();
    doc["order"] = nlohmann::json::array();
    doc["coefficients"] = nlohmann::json::array();
    for (int i = 0; i <= 3; ++i) {
      const std::string id = "f" + std::to_string(i);
      doc["models"].push_back({{"id", id}, {"loglik", loglik(rng)}, {"dim", fa_model_dimension(6, i)}});
      if (i > 0) doc["order"].push_back({"f" + std::to_string(i - 1), id});
      for (int j = 0; j <= i; ++j) {
        const auto c = fa_learning_coefficient(i, j);
        doc["coefficients"].push_back({{"i", id}, {"j", "f" + std::to_string(j)},
                                       {"lambda", c.lambda.to_string()}, {"m", c.multiplicity}});
      }
    }
    const auto in = parse_model_collection(nlohmann::json::parse(doc.dump()));
    const auto res = solve(in);
    const double log_n = std::log(static_cast<double>(in.n));
    double total = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      total += res.posterior_sbic[i];
      ok = ok && res.penalty[i] <= 0.5 * static_cast<double>(in.dims[i]) * log_n + 1e-9;
      ok = ok && res.sbic[i] >= res.bic[i] - 1e-9;
    }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
  }
  note << "100 random profiles, max |sum posterior - 1| " << worst_sum;
  return ok && worst_sum <= 1e-12;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Check>> criteria{
      {"1 reduced-rank coefficient table", coefficient_golden},
      {"2 factor-analysis coefficient table and dimensions", fa_golden},
      {"3 regular models reduce to BIC", regular_reduction},
      {"4 solver residual, bounds and oracle agreement", solver_correctness},
      {"5 loglik shift and prior rescaling equivariance", equivariance},
      {"6 reduced-rank selection study", rank_reproduction},
      {"7 sBIC selection entropy falls with n", entropy_trend},
      {"8 galaxies mixture selection", galaxies},
      {"9 MLE oracle agreement and EM monotonicity", mle_oracles},
      {"10 factor-analysis table through the solve pipeline", fa_pipeline},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    std::ostringstream note;
    bool ok = false;
    try {
      ok = check(note);
    } catch (const std::exception& e) {
      note << "exception: " << e.what();
    }
    failures += ok ? 0 : 1;
    std::printf("%s criterion %s: %s\n", ok ? "PASS" : "FAIL", name, note.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
