#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mlccp {

// Widest label space a LabelSet can hold.
inline constexpr std::size_t kMaxLabels = 32;

// Subset of {Y_1..Y_n} stored as a bitmask: bit j set means label j is present.
class LabelSet {
 public:
  using Bits = std::uint32_t;

  constexpr LabelSet() = default;
  constexpr explicit LabelSet(Bits bits) : bits_(bits) {}

  static LabelSet from_indices(const std::vector<std::size_t>& indices);

  constexpr Bits bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t label) const { return (bits_ >> label) & 1u; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }

  constexpr LabelSet with(std::size_t label) const { return LabelSet(bits_ | (Bits{1} << label)); }
  constexpr LabelSet without(std::size_t label) const { return LabelSet(bits_ & ~(Bits{1} << label)); }

  std::vector<std::size_t> indices() const;

  friend constexpr bool operator==(LabelSet, LabelSet) = default;
  friend constexpr auto operator<=>(LabelSet, LabelSet) = default;

 private:
  Bits bits_ = 0;
};

// Number of labels on which two labelsets disagree.
constexpr std::size_t symmetric_difference_size(LabelSet a, LabelSet b) {
  return static_cast<std::size_t>(std::popcount(a.bits() ^ b.bits()));
}

// Bitmask with the lowest n bits set; the universe of an n-label problem.
constexpr LabelSet::Bits full_mask(std::size_t n) {
  return n >= 32 ? ~LabelSet::Bits{0} : (LabelSet::Bits{1} << n) - 1u;
}

// Names of the labels in `set`, in label order, e.g. {"beach", "urban"}.
std::vector<std::string> label_names_of(LabelSet set, const std::vector<std::string>& names);

// Compact text form such as "{beach,urban}".
std::string to_string(LabelSet set, const std::vector<std::string>& names);

}  // namespace mlccp
