#include <doctest.h>

#include "mlccp/label_set.hpp"

using mlccp::LabelSet;

TEST_CASE("labelset bit operations") {
  const auto set = LabelSet::from_indices({0, 2, 5});
  CHECK(set.bits() == 0b100101u);
  CHECK(set.size() == 3);
  CHECK(set.contains(2));
  CHECK_FALSE(set.contains(1));
  CHECK(set.indices() == std::vector<std::size_t>{0, 2, 5});
  CHECK(set.without(2).with(1).bits() == 0b100011u);
  CHECK(LabelSet{}.empty());
}

TEST_CASE("symmetric difference counts disagreeing labels") {
  CHECK(mlccp::symmetric_difference_size(LabelSet(0b0111), LabelSet(0b0111)) == 0);
  CHECK(mlccp::symmetric_difference_size(LabelSet(0b000111), LabelSet(0b111111)) == 3);
}

TEST_CASE("full mask") {
  CHECK(mlccp::full_mask(6) == 63u);
  CHECK(mlccp::full_mask(14) == 16383u);
  CHECK(mlccp::full_mask(32) == 0xFFFFFFFFu);
}

TEST_CASE("names") {
  const std::vector<std::string> names{"beach", "sunset", "urban"};
  CHECK(mlccp::to_string(LabelSet(0b101), names) == "{beach,urban}");
  CHECK(mlccp::to_string(LabelSet(0), names) == "{}");
}

TEST_CASE("out of range index is rejected") {
  CHECK_THROWS(LabelSet::from_indices({32}));
}
