#include "mlccp/label_set.hpp"

#include "mlccp/error.hpp"

namespace mlccp {

LabelSet LabelSet::from_indices(const std::vector<std::size_t>& indices) {
  LabelSet set;
  for (auto j : indices) {
    if (j >= kMaxLabels) throw ConfigError("label index " + std::to_string(j) + " exceeds LabelSet width");
    set = set.with(j);
  }
  return set;
}

std::vector<std::size_t> LabelSet::indices() const {
  std::vector<std::size_t> out;
  for (Bits rest = bits_; rest != 0; rest &= rest - 1) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
  }
  return out;
}

std::vector<std::string> label_names_of(LabelSet set, const std::vector<std::string>& names) {
  std::vector<std::string> out;
  for (auto j : set.indices()) {
    out.push_back(j < names.size() ? names[j] : "#" + std::to_string(j));
  }
  return out;
}

std::string to_string(LabelSet set, const std::vector<std::string>& names) {
  std::string out = "{";
  bool first = true;
  for (const auto& name : label_names_of(set, names)) {
    if (!first) out += ',';
    out += name;
    first = false;
  }
  out += '}';
  return out;
}

}  // namespace mlccp
