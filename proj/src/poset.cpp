#include "sbic/poset.hpp"

#include <algorithm>
#include <unordered_map>

#include "sbic/errors.hpp"

namespace sbic {

ModelPoset::ModelPoset(std::vector<std::string> ids, std::vector<char> leq)
    : ids_(std::move(ids)), leq_(std::move(leq)) {}

ModelPoset ModelPoset::build(std::vector<std::string> ids,
                             const std::vector<std::pair<std::string, std::string>>& covers) {
  if (ids.empty()) throw Error("model poset must be nonempty");
  std::unordered_map<std::string, ModelIndex> index;
  for (ModelIndex k = 0; k < ids.size(); ++k) {
    if (!index.emplace(ids[k], k).second) throw Error("duplicate model id '" + ids[k] + "'");
  }
  std::vector<std::pair<ModelIndex, ModelIndex>> edges;
  edges.reserve(covers.size());
  for (const auto& [sub, super] : covers) {
    const auto a = index.find(sub);
    if (a == index.end()) throw UnknownIdError("unknown model id '" + sub + "'");
    const auto b = index.find(super);
    if (b == index.end()) throw UnknownIdError("unknown model id '" + super + "'");
    edges.emplace_back(a->second, b->second);
  }

  const std::size_t n = ids.size();
  std::vector<char> leq(n * n, 0);
  for (ModelIndex k = 0; k < n; ++k) leq[k * n + k] = 1;
  for (const auto& [j, i] : edges) leq[j * n + i] = 1;

  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t a = 0; a < n; ++a) {
      if (!leq[a * n + k]) continue;
      for (std::size_t b = 0; b < n; ++b) {
        if (leq[k * n + b]) leq[a * n + b] = 1;
      }
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (leq[a * n + b] && leq[b * n + a]) {
        throw CycleError("models '" + ids[a] + "' and '" + ids[b] + "' contain each other");
      }
    }
  }
  return ModelPoset(std::move(ids), std::move(leq));
}

ModelPoset ModelPoset::build(std::size_t count,
                             const std::vector<std::pair<ModelIndex, ModelIndex>>& covers) {
  std::vector<std::string> ids;
  ids.reserve(count);
  for (std::size_t k = 0; k < count; ++k) ids.push_back(std::to_string(k));
  std::vector<std::pair<std::string, std::string>> named;
  for (const auto& [j, i] : covers) {
    if (j >= count || i >= count) throw UnknownIdError("cover references index out of range");
    named.emplace_back(ids[j], ids[i]);
  }
  return build(std::move(ids), named);
}

ModelPoset ModelPoset::chain(std::vector<std::string> ids) {
  std::vector<std::pair<std::string, std::string>> covers;
  for (std::size_t k = 1; k < ids.size(); ++k) covers.emplace_back(ids[k - 1], ids[k]);
  return build(std::move(ids), covers);
}

void ModelPoset::check(ModelIndex i) const {
  if (i >= ids_.size()) throw UnknownIdError("model index " + std::to_string(i) + " out of range");
}

const std::string& ModelPoset::label(ModelIndex i) const {
  check(i);
  return ids_[i];
}

ModelIndex ModelPoset::index_of(std::string_view label) const {
  const auto it = std::find(ids_.begin(), ids_.end(), label);
  if (it == ids_.end()) throw UnknownIdError("unknown model id '" + std::string(label) + "'");
  return static_cast<ModelIndex>(it - ids_.begin());
}

bool ModelPoset::leq(ModelIndex j, ModelIndex i) const {
  check(j);
  check(i);
  return leq_[j * ids_.size() + i] != 0;
}

std::vector<ModelIndex> ModelPoset::down_set(ModelIndex i) const {
  check(i);
  std::vector<ModelIndex> out;
  for (ModelIndex j = 0; j < ids_.size(); ++j) {
    if (leq_[j * ids_.size() + i]) out.push_back(j);
  }
  return out;
}

bool ModelPoset::is_minimal(ModelIndex i) const {
  check(i);
  for (ModelIndex j = 0; j < ids_.size(); ++j) {
    if (j != i && leq_[j * ids_.size() + i]) return false;
  }
  return true;
}

std::vector<ModelIndex> ModelPoset::linear_extension() const {
  // Kahn's algorithm, always emitting the smallest available index.
  const std::size_t n = ids_.size();
  std::vector<std::size_t> pending(n, 0);
  for (ModelIndex i = 0; i < n; ++i) {
    for (ModelIndex j = 0; j < n; ++j) {
      if (j != i && leq_[j * n + i]) ++pending[i];
    }
  }
  std::vector<char> done(n, 0);
  std::vector<ModelIndex> order;
  order.reserve(n);
  while (order.size() < n) {
    ModelIndex next = n;
    for (ModelIndex i = 0; i < n; ++i) {
      if (!done[i] && pending[i] == 0) {
        next = i;
        break;
      }
    }
    done[next] = 1;
    order.push_back(next);
    for (ModelIndex i = 0; i < n; ++i) {
      if (i != next && leq_[next * n + i]) --pending[i];
    }
  }
  return order;
}

}  // namespace sbic
