#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mlccp {

// Assignment of training instances to K cross-conformal folds.
class FoldPartition {
 public:
  FoldPartition(std::vector<std::size_t> assignments, std::size_t k, std::uint64_t seed);

  std::size_t k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return assignments_.size(); }
  const std::vector<std::size_t>& assignments() const { return assignments_; }
  std::size_t fold_of(std::size_t instance) const { return assignments_[instance]; }

  // Instances in fold k, ascending.
  std::vector<std::size_t> members(std::size_t fold) const;
  // Instances outside fold k, ascending.
  std::vector<std::size_t> complement(std::size_t fold) const;

 private:
  std::vector<std::size_t> assignments_;
  std::size_t k_;
  std::uint64_t seed_;
};

// Seeded uniform permutation dealt round-robin into k folds; fold sizes differ
// by at most one. Requires 2 <= k <= dataset_size.
FoldPartition make_folds(std::size_t dataset_size, std::size_t k, std::uint64_t seed);

// Fold count giving roughly 100 instances per fold: round(l / 100), at least 2.
std::size_t auto_fold_count(std::size_t dataset_size);

}  // namespace mlccp
