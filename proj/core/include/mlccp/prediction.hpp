#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mlccp/conformal.hpp"
#include "mlccp/label_set.hpp"

namespace mlccp {

// Labelset with the highest p-value, qualified by confidence (one minus the
// runner-up p-value) and credibility (its own p-value).
struct ForcedPrediction {
  LabelSet labelset;
  double confidence = 0.0;
  double credibility = 0.0;
};

// All labelsets whose p-value exceeds delta; confidence level 1 - delta.
struct PredictionSet {
  double delta = 0.0;
  std::vector<LabelSet> members;  // ascending bitmask order

  std::size_t size() const { return members.size(); }
  bool contains(LabelSet set) const;
};

// Ties at the top go to the smallest bitmask. The runner-up is the largest
// p-value among all other labelsets, so a tie gives confidence 1 - credibility.
ForcedPrediction forced(const PValueTable& table);

// Strict filter p > delta; may be empty. Requires 0 < delta < 1.
PredictionSet prediction_set(const PValueTable& table, double delta);

// {"labels": [...], "confidence": c, "credibility": r}
nlohmann::json to_json(const ForcedPrediction& prediction, const std::vector<std::string>& label_names);
// {"delta": d, "members": [[...], ...], "size": s}
nlohmann::json to_json(const PredictionSet& set, const std::vector<std::string>& label_names);

}  // namespace mlccp
