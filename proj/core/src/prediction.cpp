#include "mlccp/prediction.hpp"

#include <algorithm>

#include "mlccp/error.hpp"

namespace mlccp {

bool PredictionSet::contains(LabelSet set) const {
  return std::binary_search(members.begin(), members.end(), set);
}

ForcedPrediction forced(const PValueTable& table) {
  const auto& num = table.numerators();
  // Numerators share the denominator, so comparing them is exact.
  std::size_t best = 0;
  for (std::size_t i = 1; i < num.size(); ++i) {
    if (num[i] > num[best]) best = i;
  }
  std::uint32_t runner_up = 0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (i != best) runner_up = std::max(runner_up, num[i]);
  }
  const double denom = static_cast<double>(table.denominator());
  ForcedPrediction out;
  out.labelset = LabelSet(static_cast<LabelSet::Bits>(best + 1));
  out.credibility = static_cast<double>(num[best]) / denom;
  // A single-labelset table (n = 1) has no runner-up.
  out.confidence = 1.0 - static_cast<double>(runner_up) / denom;
  return out;
}

PredictionSet prediction_set(const PValueTable& table, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("significance level delta must lie in (0, 1)");
  PredictionSet out;
  out.delta = delta;
  const auto& num = table.numerators();
  const double denom = static_cast<double>(table.denominator());
  for (std::size_t i = 0; i < num.size(); ++i) {
    if (static_cast<double>(num[i]) / denom > delta) out.members.emplace_back(static_cast<LabelSet::Bits>(i + 1));
  }
  return out;
}

nlohmann::json to_json(const ForcedPrediction& prediction, const std::vector<std::string>& label_names) {
  return {{"labels", label_names_of(prediction.labelset, label_names)},
          {"confidence", prediction.confidence},
          {"credibility", prediction.credibility}};
}

nlohmann::json to_json(const PredictionSet& set, const std::vector<std::string>& label_names) {
  auto members = nlohmann::json::array();
  for (auto m : set.members) members.push_back(label_names_of(m, label_names));
  return {{"delta", set.delta}, {"members", std::move(members)}, {"size", set.size()}};
}

}  // namespace mlccp
