#include "mlccp/folds.hpp"

#include <algorithm>
#include <string>

#include "mlccp/error.hpp"
#include "mlccp/random.hpp"

namespace mlccp {

FoldPartition::FoldPartition(std::vector<std::size_t> assignments, std::size_t k, std::uint64_t seed)
    : assignments_(std::move(assignments)), k_(k), seed_(seed) {
  if (k_ < 2) throw ConfigError("fold count must be at least 2");
  std::vector<std::size_t> sizes(k_, 0);
  for (auto f : assignments_) {
    if (f >= k_) throw ConfigError("fold index " + std::to_string(f) + " out of range");
    ++sizes[f];
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (*lo == 0) throw ConfigError("every fold must be non-empty");
  if (*hi - *lo > 1) throw ConfigError("fold sizes must differ by at most one");
}

std::vector<std::size_t> FoldPartition::members(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPartition::complement(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments_.size(); ++i) {
    if (assignments_[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPartition make_folds(std::size_t dataset_size, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > dataset_size) {
    throw ConfigError("fold count " + std::to_string(k) + " must lie in [2, " + std::to_string(dataset_size) + "]");
  }
  Rng rng(seed);
  const auto perm = random_permutation(dataset_size, rng);
  std::vector<std::size_t> assignments(dataset_size);
  for (std::size_t i = 0; i < dataset_size; ++i) assignments[perm[i]] = i % k;
  return FoldPartition(std::move(assignments), k, seed);
}

std::size_t auto_fold_count(std::size_t dataset_size) {
  const std::size_t k = (dataset_size + 50) / 100;
  return std::max<std::size_t>(k, 2);
}

}  // namespace mlccp
