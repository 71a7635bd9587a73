#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace sbic::experiments {

enum class Criterion { kBic, kSbic };

const char* criterion_name(Criterion c);
Criterion parse_criterion(const std::string& name);

struct ExperimentConfig {
  int N = 10;
  int M = 15;
  std::vector<double> true_singular_values{1.25, 1.0, 0.75, 0.5};
  std::vector<std::int64_t> sample_sizes{100, 150, 200, 250, 300, 400, 500};
  int replicates = 500;
  int max_rank = 10;
  std::uint64_t master_seed = 1;

  /// Throws sbic::Error describing the first violated constraint.
  void validate() const;

  /// Reads a JSON object with any of the keys N, M, true_singular_values,
  /// sample_sizes, replicates, max_rank, master_seed; missing keys keep their
  /// defaults. Throws SchemaError naming the offending key.
  static ExperimentConfig from_json_file(const std::string& path);
};

/// Counts of selected ranks per (sample size, criterion).
class SelectionFrequencies {
 public:
  SelectionFrequencies() = default;
  SelectionFrequencies(std::vector<std::int64_t> sample_sizes, int max_rank, int replicates);

  void add(std::int64_t n, Criterion c, int rank, std::int64_t count = 1);

  std::int64_t count(std::int64_t n, Criterion c, int rank) const;
  /// Counts over ranks 0..max_rank.
  std::vector<std::int64_t> counts(std::int64_t n, Criterion c) const;
  /// Smallest most-frequent rank.
  int modal_rank(std::int64_t n, Criterion c) const;
  double mean_rank(std::int64_t n, Criterion c) const;

  const std::vector<std::int64_t>& sample_sizes() const { return sample_sizes_; }
  int max_rank() const { return max_rank_; }
  int replicates() const { return replicates_; }

  friend bool operator==(const SelectionFrequencies&, const SelectionFrequencies&) = default;

 private:
  std::vector<std::int64_t> sample_sizes_;
  int max_rank_ = 0;
  int replicates_ = 0;
  std::map<std::tuple<std::int64_t, int, int>, std::int64_t> counts_;
};

/// Simulates `replicates` data sets per sample size and records the rank
/// selected by BIC and by sBIC. Replicate r at sample size n uses the stream
/// keyed by (master_seed, n, r); ties go to the smaller rank.
SelectionFrequencies run_rrr_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

/// Shannon entropy in nats of the relative frequencies, 0 ln 0 = 0.
double entropy(const std::vector<std::int64_t>& counts);

/// Writes the frequency table to `path` and the per-(n, criterion) entropy
/// table next to it, named by entropy_path_for(path).
void emit_results(const SelectionFrequencies& freqs, const std::string& path);
std::string entropy_path_for(const std::string& path);

/// Parses a frequency table written by emit_results.
SelectionFrequencies read_frequencies(const std::string& path);

}  // namespace sbic::experiments
