#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sbic {

/// Dense internal index of a model inside a ModelPoset.
using ModelIndex = std::size_t;

/// Finite set of candidate models ordered by inclusion.
///
/// Models carry string labels externally and are addressed by dense indices
/// internally. The order relation is stored as a dense boolean matrix that is
/// reflexive, antisymmetric and transitively closed. Instances are immutable
/// after construction.
class ModelPoset {
 public:
  /// Builds the reflexive-transitive closure of `covers`, where each pair
  /// (sub, super) states that model `sub` is contained in model `super`.
  /// Throws UnknownIdError for labels not in `ids` and CycleError when the
  /// closure is not antisymmetric.
  static ModelPoset build(std::vector<std::string> ids,
                          const std::vector<std::pair<std::string, std::string>>& covers);

  /// Index-based variant; labels default to the decimal index.
  static ModelPoset build(std::size_t count,
                          const std::vector<std::pair<ModelIndex, ModelIndex>>& covers);

  /// Chain 0 ⪯ 1 ⪯ ... ⪯ count-1 with the given labels.
  static ModelPoset chain(std::vector<std::string> ids);

  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& label(ModelIndex i) const;
  ModelIndex index_of(std::string_view label) const;

  /// True when model j is a submodel of model i (j ⪯ i).
  bool leq(ModelIndex j, ModelIndex i) const;
  bool less(ModelIndex j, ModelIndex i) const { return j != i && leq(j, i); }

  /// All j with j ⪯ i, ascending index order, including i.
  std::vector<ModelIndex> down_set(ModelIndex i) const;

  /// Every model appears after all of its strict submodels; ties go to the
  /// smaller index.
  std::vector<ModelIndex> linear_extension() const;

  /// Minimal elements (no strict submodel).
  bool is_minimal(ModelIndex i) const;

 private:
  ModelPoset(std::vector<std::string> ids, std::vector<char> leq);

  void check(ModelIndex i) const;

  std::vector<std::string> ids_;
  std::vector<char> leq_;  // row-major, leq_[j * size + i] == (j ⪯ i)
};

}  // namespace sbic
