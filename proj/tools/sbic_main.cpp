// Command-line front end: solve model collections from file, run the three
// model-family pipelines and the rank-selection experiment.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sbic/collection_io.hpp"
#include "sbic/errors.hpp"
#include "sbic/experiments.hpp"
#include "sbic/factor.hpp"
#include "sbic/mixture.hpp"
#include "sbic/parallel.hpp"
#include "sbic/rrr.hpp"
#include "sbic/solver.hpp"
#include "sbic/table_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSchema = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumeric = 4;
constexpr std::uint64_t kDefaultSeed = 20160621;

struct OutputOptions {
  std::string path;
  std::string format = "json";
};

void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("-o,--output", out.path, "Output file (default: standard output)");
  cmd->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

void write_text(const OutputOptions& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out.path, std::ios::binary);
  if (!file) throw sbic::IoError("cannot write '" + out.path + "'");
  file << text;
}

int exit_code_for(const sbic::Error& e) {
  if (dynamic_cast<const sbic::SchemaError*>(&e) || dynamic_cast<const sbic::IoError*>(&e)) {
    return kExitSchema;
  }
  if (dynamic_cast<const sbic::ValidationError*>(&e) || dynamic_cast<const sbic::SampleSizeError*>(&e) ||
      dynamic_cast<const sbic::RangeError*>(&e) || dynamic_cast<const sbic::RankRangeError*>(&e) ||
      dynamic_cast<const sbic::DimensionError*>(&e)) {
    return kExitValidation;
  }
  return kExitNumeric;
}

void report_seed(std::uint64_t seed) { std::cerr << "seed: " << seed << '\n'; }

// Table plus the selected model per criterion.
std::string render(const sbic::SbicInput& input, const sbic::SbicResult& result,
                   const OutputOptions& out, json extra = json::object()) {
  const std::string best_bic = input.poset.label(sbic::argmax(result.bic));
  const std::string best_sbic = input.poset.label(sbic::argmax(result.sbic));
  if (out.format == "csv") {
    std::string text = sbic::result_to_csv(input, result);
    text += "# selected_bic," + best_bic + "\n# selected_sbic," + best_sbic + "\n";
    return text;
  }
  json doc = std::move(extra);
  doc["n"] = input.n;
  doc["models"] = sbic::result_to_json(input, result);
  doc["selected"] = {{"bic", best_bic}, {"sbic", best_sbic}};
  return doc.dump(2) + "\n";
}

std::vector<double> rounded(const std::vector<double>& v) {
  std::vector<double> out;
  for (double x : v) out.push_back(sbic::round_significant(x));
  return out;
}

int cmd_solve(const std::string& input_path, const OutputOptions& out) {
  const sbic::SbicInput input = sbic::read_model_collection(input_path);
  const sbic::SbicResult result = sbic::solve(input);
  json extra;
  extra["residual"] = sbic::round_significant(sbic::residual(input, result));
  write_text(out, render(input, result, out, extra));
  return 0;
}

struct RrrArgs {
  std::string y1, y2, data;
  bool simulate = false;
  int N = 10, M = 15;
  std::vector<double> singular_values{1.25, 1.0, 0.75, 0.5};
  std::int64_t n = 150;
  int max_rank = -1;
};

int cmd_rrr(const RrrArgs& args, std::uint64_t seed, const OutputOptions& out) {
  sbic::rrr::RrrData data;
  if (args.simulate) {
    sbic::Rng rng = sbic::stream_rng(seed, {0});
    const Eigen::MatrixXd pi =
        sbic::rrr::simulate_coefficient_matrix(args.N, args.M, args.singular_values, rng);
    data = sbic::rrr::simulate_data(pi, args.n, rng);
  } else if (!args.data.empty()) {
    data = sbic::rrr::read_csv(args.data);
  } else if (!args.y1.empty() && !args.y2.empty()) {
    data = sbic::rrr::read_csv(args.y1, args.y2);
  } else {
    throw sbic::SchemaError("rrr needs --simulate, --data, or both --y1 and --y2");
  }
  const int full = static_cast<int>(std::min(data.y1.rows(), data.y2.rows()));
  const int max_rank = args.max_rank < 0 ? full : args.max_rank;
  const auto profile = sbic::rrr::fit_profile(data, max_rank);
  const auto input = sbic::rrr::rrr_sbic_input(profile);
  const auto result = sbic::solve(input);
  json extra;
  extra["N"] = profile.N;
  extra["M"] = profile.M;
  extra["selected_rank"] = {{"bic", sbic::argmax(result.bic)}, {"sbic", sbic::argmax(result.sbic)}};
  write_text(out, render(input, result, out, extra));
  return 0;
}

struct MixtureArgs {
  std::string data;
  bool galaxies = false;
  int max_components = 10;
  int restarts = 500;
  double floor = sbic::mixture::kDefaultFloorFraction;
  unsigned threads = 0;
};

int cmd_mixture(const MixtureArgs& args, std::uint64_t seed, const OutputOptions& out) {
  std::vector<double> values;
  if (args.galaxies) {
    values = sbic::mixture::galaxies_dataset();
  } else if (!args.data.empty()) {
    values = sbic::read_real_list(args.data);
  } else {
    throw sbic::SchemaError("mixture needs --data or --galaxies");
  }
  const double floor = sbic::mixture::variance_floor(values, args.floor);
  const unsigned threads = args.threads ? args.threads : sbic::default_thread_count();
  const auto profile = sbic::mixture::fit_mixture_profile(values, args.max_components,
                                                          args.restarts, floor, seed, threads);
  for (int k : profile.nonmonotone) {
    std::cerr << "warning: best log-likelihood with " << k
              << " components is below the previous count (EM local optimum)\n";
  }
  const auto input = sbic::mixture::mixture_sbic_input(profile);
  const auto result = sbic::solve(input);
  json extra;
  json fits = json::array();
  for (const auto& fit : profile.fits) {
    fits.push_back({{"components", fit.components()},
                    {"loglik", sbic::round_significant(fit.loglik)},
                    {"weights", rounded(fit.weights)},
                    {"means", rounded(fit.means)},
                    {"variances", rounded(fit.variances)}});
  }
  extra["profile"] = std::move(fits);
  extra["variance_floor"] = sbic::round_significant(floor);
  extra["restarts"] = args.restarts;
  write_text(out, render(input, result, out, extra));
  return 0;
}

struct FactorArgs {
  std::string data, cov;
  std::int64_t n = 0;
  int max_factors = 3;
  int restarts = 50;
  unsigned threads = 0;
};

int cmd_factor(const FactorArgs& args, std::uint64_t seed, const OutputOptions& out) {
  Eigen::MatrixXd S;
  std::int64_t n = args.n;
  if (!args.data.empty()) {
    const Eigen::MatrixXd obs = sbic::factor::read_observations(args.data);
    S = sbic::factor::sample_covariance(obs);
    n = obs.rows();
  } else if (!args.cov.empty()) {
    if (n < 1) throw sbic::SchemaError("--cov requires --n");
    S = sbic::factor::read_covariance(args.cov);
  } else {
    throw sbic::SchemaError("factor needs --data or --cov with --n");
  }
  if (args.max_factors < 0 || args.max_factors > 3) {
    throw sbic::RangeError("--max-factors must be between 0 and 3");
  }
  sbic::factor::FactorOptions options;
  options.restarts = args.restarts;
  const unsigned threads = args.threads ? args.threads : sbic::default_thread_count();
  const auto profile = sbic::factor::fit_factor_profile(S, n, args.max_factors, seed, options, threads);
  for (std::size_t i = 1; i < profile.size(); ++i) {
    if (profile[i].loglik < profile[i - 1].loglik) {
      std::cerr << "warning: log-likelihood with " << i << " factors is below " << i - 1 << '\n';
    }
  }
  const auto input = sbic::factor::fa_sbic_input(profile, n);
  const auto result = sbic::solve(input);
  json extra;
  json fits = json::array();
  for (const auto& fit : profile) {
    fits.push_back({{"factors", fit.factors()},
                    {"loglik", sbic::round_significant(fit.loglik)},
                    {"uniquenesses", rounded(std::vector<double>(fit.uniquenesses.begin(),
                                                                 fit.uniquenesses.end()))}});
  }
  extra["profile"] = std::move(fits);
  write_text(out, render(input, result, out, extra));
  return 0;
}

struct ExperimentArgs {
  std::string config;
  std::string output = "rank_selection.csv";
  sbic::experiments::ExperimentConfig cfg;
  unsigned threads = 0;
};

int cmd_experiment(ExperimentArgs args, std::optional<std::uint64_t> seed) {
  sbic::experiments::ExperimentConfig cfg = args.cfg;
  if (!args.config.empty()) cfg = sbic::experiments::ExperimentConfig::from_json_file(args.config);
  if (seed) cfg.master_seed = *seed;
  report_seed(cfg.master_seed);
  const unsigned threads = args.threads ? args.threads : sbic::default_thread_count();
  const auto freqs = sbic::experiments::run_rrr_experiment(cfg, threads);
  sbic::experiments::emit_results(freqs, args.output);
  std::cerr << "wrote " << args.output << " and " << sbic::experiments::entropy_path_for(args.output)
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular BIC model selection"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_opt;
  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed_opt, "Master random seed");
  };

  OutputOptions out;

  auto* solve_cmd = app.add_subcommand("solve", "Compute BIC and sBIC for a model-collection JSON file");
  std::string input_path;
  solve_cmd->add_option("input", input_path, "Model-collection JSON file")->required();
  add_output_options(solve_cmd, out);
  add_seed(solve_cmd);

  auto* rrr_cmd = app.add_subcommand("rrr", "Reduced-rank regression rank selection");
  RrrArgs rrr_args;
  rrr_cmd->add_option("--y1", rrr_args.y1, "CSV of responses (rows = observations)");
  rrr_cmd->add_option("--y2", rrr_args.y2, "CSV of covariates (rows = observations)");
  rrr_cmd->add_option("--data", rrr_args.data, "Single CSV with y1_* and y2_* columns");
  rrr_cmd->add_flag("--simulate", rrr_args.simulate, "Simulate data instead of reading it");
  rrr_cmd->add_option("--N", rrr_args.N, "Response dimension when simulating");
  rrr_cmd->add_option("--M", rrr_args.M, "Covariate dimension when simulating");
  rrr_cmd->add_option("--singular-values", rrr_args.singular_values, "True singular values")
      ->delimiter(',');
  rrr_cmd->add_option("--n", rrr_args.n, "Sample size when simulating");
  rrr_cmd->add_option("--max-rank", rrr_args.max_rank, "Largest rank considered (default min(N, M))");
  add_output_options(rrr_cmd, out);
  add_seed(rrr_cmd);

  auto* mix_cmd = app.add_subcommand("mixture", "Univariate Gaussian mixture component selection");
  MixtureArgs mix_args;
  mix_cmd->add_option("--data", mix_args.data, "Single-column CSV or whitespace-separated reals");
  mix_cmd->add_flag("--galaxies", mix_args.galaxies, "Use the bundled galaxies velocities");
  mix_cmd->add_option("--max-components", mix_args.max_components)->check(CLI::PositiveNumber);
  mix_cmd->add_option("--restarts", mix_args.restarts)->check(CLI::PositiveNumber);
  mix_cmd->add_option("--floor", mix_args.floor, "Variance floor as a fraction of the sample variance")
      ->check(CLI::PositiveNumber);
  mix_cmd->add_option("--threads", mix_args.threads, "Worker threads (default SBIC_THREADS or all cores)");
  add_output_options(mix_cmd, out);
  add_seed(mix_cmd);

  auto* fa_cmd = app.add_subcommand("factor", "Factor analysis with six observed variables");
  FactorArgs fa_args;
  fa_cmd->add_option("--data", fa_args.data, "CSV of observations (rows = cases, 6 columns)");
  fa_cmd->add_option("--cov", fa_args.cov, "CSV with a 6 x 6 sample covariance matrix");
  fa_cmd->add_option("--n", fa_args.n, "Sample size for --cov");
  fa_cmd->add_option("--max-factors", fa_args.max_factors, "At most 3");
  fa_cmd->add_option("--restarts", fa_args.restarts)->check(CLI::PositiveNumber);
  fa_cmd->add_option("--threads", fa_args.threads, "Worker threads");
  add_output_options(fa_cmd, out);
  add_seed(fa_cmd);

  auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo rank-selection study");
  ExperimentArgs exp_args;
  exp_cmd->add_option("--config", exp_args.config, "JSON experiment configuration");
  exp_cmd->add_option("-o,--output", exp_args.output, "Frequency CSV; entropies go to *_entropy.csv");
  exp_cmd->add_option("--N", exp_args.cfg.N);
  exp_cmd->add_option("--M", exp_args.cfg.M);
  exp_cmd->add_option("--singular-values", exp_args.cfg.true_singular_values)->delimiter(',');
  exp_cmd->add_option("--sample-sizes", exp_args.cfg.sample_sizes)->delimiter(',');
  exp_cmd->add_option("--replicates", exp_args.cfg.replicates);
  exp_cmd->add_option("--max-rank", exp_args.cfg.max_rank);
  exp_cmd->add_option("--threads", exp_args.threads);
  add_seed(exp_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (*exp_cmd) return cmd_experiment(exp_args, seed_opt);
    const std::uint64_t seed = seed_opt.value_or(kDefaultSeed);
    report_seed(seed);
    if (*solve_cmd) return cmd_solve(input_path, out);
    if (*rrr_cmd) return cmd_rrr(rrr_args, seed, out);
    if (*mix_cmd) return cmd_mixture(mix_args, seed, out);
    if (*fa_cmd) return cmd_factor(fa_args, seed, out);
  } catch (const sbic::Error& e) {
    const int code = exit_code_for(e);
    std::cerr << (code == kExitSchema ? "input error: " : code == kExitValidation ? "validation error: " : "numeric error: ")
              << e.what() << '\n';
    return code;
  }
  return 0;
}
