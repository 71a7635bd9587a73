#include "sbic/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sbic/errors.hpp"
#include "sbic/parallel.hpp"
#include "sbic/rng.hpp"
#include "sbic/rrr.hpp"
#include "sbic/solver.hpp"

namespace sbic::experiments {

const char* criterion_name(Criterion c) { return c == Criterion::kBic ? "BIC" : "sBIC"; }

Criterion parse_criterion(const std::string& name) {
  if (name == "BIC") return Criterion::kBic;
  if (name == "sBIC") return Criterion::kSbic;
  throw IoError("unknown criterion '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (N < 1 || M < 1) throw DimensionError("N and M must be positive");
  if (replicates < 1) throw Error("replicates must be at least 1");
  if (max_rank < 0 || max_rank > std::min(N, M)) throw RankRangeError("max_rank out of range");
  if (true_singular_values.size() > static_cast<std::size_t>(std::min(N, M))) {
    throw DimensionError("more singular values than min(N, M)");
  }
  if (sample_sizes.empty()) throw Error("no sample sizes");
  for (auto n : sample_sizes) {
    if (n < std::max<std::int64_t>(3, M)) {
      throw SampleSizeError("sample size " + std::to_string(n) + " below max(3, M)");
    }
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  const auto read = [&](const char* key, auto& field) {
    if (!doc.contains(key)) return;
    try {
      doc.at(key).get_to(field);
    } catch (const nlohmann::json::exception&) {
      throw SchemaError(std::string("invalid value for key '") + key + "'");
    }
  };
  read("N", cfg.N);
  read("M", cfg.M);
  read("true_singular_values", cfg.true_singular_values);
  read("sample_sizes", cfg.sample_sizes);
  read("replicates", cfg.replicates);
  read("max_rank", cfg.max_rank);
  read("master_seed", cfg.master_seed);
  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"N", "M", "true_singular_values", "sample_sizes",
                                  "replicates", "max_rank", "master_seed"};
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw SchemaError("unknown key '" + key + "'");
    }
  }
  return cfg;
}

SelectionFrequencies::SelectionFrequencies(std::vector<std::int64_t> sample_sizes, int max_rank,
                                           int replicates)
    : sample_sizes_(std::move(sample_sizes)), max_rank_(max_rank), replicates_(replicates) {}

void SelectionFrequencies::add(std::int64_t n, Criterion c, int rank, std::int64_t count) {
  if (rank < 0 || rank > max_rank_) throw RankRangeError("selected rank out of range");
  counts_[{n, static_cast<int>(c), rank}] += count;
}

std::int64_t SelectionFrequencies::count(std::int64_t n, Criterion c, int rank) const {
  const auto it = counts_.find({n, static_cast<int>(c), rank});
  return it == counts_.end() ? 0 : it->second;
}

std::vector<std::int64_t> SelectionFrequencies::counts(std::int64_t n, Criterion c) const {
  std::vector<std::int64_t> out(max_rank_ + 1);
  for (int r = 0; r <= max_rank_; ++r) out[r] = count(n, c, r);
  return out;
}

int SelectionFrequencies::modal_rank(std::int64_t n, Criterion c) const {
  const auto v = counts(n, c);
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

double SelectionFrequencies::mean_rank(std::int64_t n, Criterion c) const {
  const auto v = counts(n, c);
  double total = 0.0, weighted = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    total += static_cast<double>(v[r]);
    weighted += static_cast<double>(r) * static_cast<double>(v[r]);
  }
  if (total == 0.0) throw EmptyError("no selections recorded");
  return weighted / total;
}

SelectionFrequencies run_rrr_experiment(const ExperimentConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t per_n = static_cast<std::size_t>(cfg.replicates);
  const std::size_t total = cfg.sample_sizes.size() * per_n;
  std::vector<std::pair<int, int>> picks(total);  // (BIC rank, sBIC rank)

  parallel_for(total, threads, [&](std::size_t task) {
    const std::int64_t n = cfg.sample_sizes[task / per_n];
    const std::size_t replicate = task % per_n;
    Rng rng = stream_rng(cfg.master_seed, {static_cast<std::uint64_t>(n), replicate});
    const Eigen::MatrixXd pi =
        rrr::simulate_coefficient_matrix(cfg.N, cfg.M, cfg.true_singular_values, rng);
    const rrr::RrrData data = rrr::simulate_data(pi, n, rng);
    const SbicResult result = solve(rrr::rrr_sbic_input(rrr::fit_profile(data, cfg.max_rank)));
    picks[task] = {static_cast<int>(argmax(result.bic)), static_cast<int>(argmax(result.sbic))};
  });

  SelectionFrequencies freqs(cfg.sample_sizes, cfg.max_rank, cfg.replicates);
  for (std::size_t task = 0; task < total; ++task) {
    const std::int64_t n = cfg.sample_sizes[task / per_n];
    freqs.add(n, Criterion::kBic, picks[task].first);
    freqs.add(n, Criterion::kSbic, picks[task].second);
  }
  return freqs;
}

double entropy(const std::vector<std::int64_t>& counts) {
  std::int64_t total = 0;
  for (auto c : counts) {
    if (c < 0) throw Error("negative count");
    total += c;
  }
  if (total == 0) throw EmptyError("entropy of an empty frequency table");
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log(p);
  }
  return h;
}

std::string entropy_path_for(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "_entropy";
  }
  return path.substr(0, dot) + "_entropy" + path.substr(dot);
}

namespace {

std::string format_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

void emit_results(const SelectionFrequencies& freqs, const std::string& path) {
  constexpr Criterion kCriteria[] = {Criterion::kBic, Criterion::kSbic};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "sample_size,criterion,rank,count,relative_frequency\n";
  for (auto n : freqs.sample_sizes()) {
    for (Criterion c : kCriteria) {
      for (int r = 0; r <= freqs.max_rank(); ++r) {
        const auto k = freqs.count(n, c, r);
        out << n << ',' << criterion_name(c) << ',' << r << ',' << k << ','
            << format_number(static_cast<double>(k) / freqs.replicates()) << '\n';
      }
    }
  }
  if (!out) throw IoError("failed writing '" + path + "'");

  const std::string entropy_path = entropy_path_for(path);
  std::ofstream summary(entropy_path);
  if (!summary) throw IoError("cannot write '" + entropy_path + "'");
  summary << "sample_size,criterion,entropy\n";
  for (auto n : freqs.sample_sizes()) {
    for (Criterion c : kCriteria) {
      summary << n << ',' << criterion_name(c) << ',' << format_number(entropy(freqs.counts(n, c)))
              << '\n';
    }
  }
  if (!summary) throw IoError("failed writing '" + entropy_path + "'");
}

SelectionFrequencies read_frequencies(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line != "sample_size,criterion,rank,count,relative_frequency") {
    throw IoError("unexpected header in '" + path + "'");
  }
  struct Row {
    std::int64_t n;
    Criterion c;
    int rank;
    std::int64_t count;
  };
  std::vector<Row> rows;
  std::vector<std::int64_t> sizes;
  int max_rank = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string n, c, rank, count;
    if (!std::getline(fields, n, ',') || !std::getline(fields, c, ',') ||
        !std::getline(fields, rank, ',') || !std::getline(fields, count, ',')) {
      throw IoError("malformed row '" + line + "'");
    }
    Row row{std::stoll(n), parse_criterion(c), std::stoi(rank), std::stoll(count)};
    if (std::find(sizes.begin(), sizes.end(), row.n) == sizes.end()) sizes.push_back(row.n);
    max_rank = std::max(max_rank, row.rank);
    rows.push_back(row);
  }
  if (rows.empty()) throw EmptyError("no rows in '" + path + "'");
  std::int64_t replicates = 0;
  for (const auto& r : rows) {
    if (r.n == rows.front().n && r.c == rows.front().c) replicates += r.count;
  }
  SelectionFrequencies freqs(sizes, max_rank, static_cast<int>(replicates));
  for (const auto& r : rows) {
    if (r.count > 0) freqs.add(r.n, r.c, r.rank, r.count);
  }
  return freqs;
}

}  // namespace sbic::experiments
