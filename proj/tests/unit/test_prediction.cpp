#include <doctest.h>

#include "mlccp/error.hpp"
#include "mlccp/prediction.hpp"
#include "mlccp/random.hpp"

using namespace mlccp;

TEST_CASE("forced prediction picks the highest p-value") {
  // p({a}) = 0.9, p({b}) = 0.2, p({a,b}) = 0.1
  const PValueTable t(2, 9, {9, 2, 1});
  const auto f = forced(t);
  CHECK(f.labelset == LabelSet::from_indices({0}));
  CHECK(f.credibility == doctest::Approx(0.9));
  CHECK(f.confidence == doctest::Approx(0.8));

  const auto j = to_json(f, {"a", "b"});
  CHECK(j["labels"] == nlohmann::json::array({"a"}));
  CHECK(j["credibility"].get<double>() == doctest::Approx(0.9));
}

TEST_CASE("ties go to the smallest bitmask and leave confidence 1 - credibility") {
  const PValueTable t(2, 4, {3, 3, 3});
  const auto f = forced(t);
  CHECK(f.labelset.bits() == 1);
  CHECK(f.credibility == doctest::Approx(0.6));
  CHECK(f.confidence == doctest::Approx(0.4));

  const PValueTable u(2, 4, {1, 5, 5});
  CHECK(forced(u).labelset.bits() == 2);
  CHECK(forced(u).credibility == 1.0);
}

TEST_CASE("a single-labelset table has full confidence") {
  const PValueTable t(1, 3, {2});
  const auto f = forced(t);
  CHECK(f.labelset.bits() == 1);
  CHECK(f.confidence == 1.0);
  CHECK(f.credibility == 0.5);
}

TEST_CASE("prediction sets") {
  const PValueTable t(2, 9, {9, 2, 1});
  SUBCASE("strict threshold") {
    const auto s = prediction_set(t, 0.2);
    CHECK(s.size() == 1);
    CHECK(s.contains(LabelSet(0b01)));
    CHECK_FALSE(s.contains(LabelSet(0b10)));
    CHECK(prediction_set(t, 0.15).size() == 2);
    CHECK(prediction_set(t, 0.05).size() == 3);
  }
  SUBCASE("empty set when every p-value is at or below delta") {
    const PValueTable low(2, 9, {1, 1, 1});
    const auto s = prediction_set(low, 0.1);
    CHECK(s.size() == 0);
    const auto j = to_json(s, {"a", "b"});
    CHECK(j["size"] == 0);
    CHECK(j["members"].empty());
  }
  SUBCASE("json lists members by name") {
    const auto j = to_json(prediction_set(t, 0.05), {"a", "b"});
    CHECK(j["size"] == 3);
    CHECK(j["members"][2] == nlohmann::json::array({"a", "b"}));
    CHECK(j["delta"].get<double>() == 0.05);
  }
  SUBCASE("delta outside (0, 1)") {
    CHECK_THROWS_AS(prediction_set(t, 0.0), ConfigError);
    CHECK_THROWS_AS(prediction_set(t, 1.0), ConfigError);
    CHECK_THROWS_AS(prediction_set(t, 1.5), ConfigError);
    CHECK_THROWS_AS(prediction_set(t, -0.1), ConfigError);
  }
}

TEST_CASE("property: sets nest as delta shrinks and hold exactly the labelsets above delta") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(6);
    const std::size_t l = 1 + rng.uniform_index(200);
    std::vector<std::uint32_t> num((std::size_t{1} << n) - 1);
    for (auto& v : num) v = static_cast<std::uint32_t>(1 + rng.uniform_index(l + 1));
    const PValueTable t(n, l, num);
    const double d1 = 0.01 + 0.98 * rng.uniform01();
    const double d2 = 0.01 + 0.98 * rng.uniform01();
    const auto small = prediction_set(t, std::max(d1, d2));
    const auto large = prediction_set(t, std::min(d1, d2));
    for (auto m : small.members) CHECK(large.contains(m));
    for (LabelSet::Bits m = 1; m <= num.size(); ++m) CHECK(large.contains(LabelSet(m)) == (t.p(LabelSet(m)) > large.delta));
    CHECK(std::is_sorted(large.members.begin(), large.members.end()));

    const auto f = forced(t);
    CHECK(f.credibility == doctest::Approx(*std::max_element(num.begin(), num.end()) / double(l + 1)));
    CHECK(f.confidence >= 1.0 - f.credibility - 1e-12);
    CHECK(f.confidence <= 1.0);
    CHECK(f.confidence >= 0.0);
  }
}
