#include "mlccp/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "mlccp/error.hpp"
#include "text_util.hpp"

namespace mlccp {

namespace fs = std::filesystem;
using detail::trim;

MultiLabelDataset::MultiLabelDataset(FeatureMatrix features, LabelMatrix labels,
                                     std::vector<std::string> label_names)
    : features_(std::move(features)), labels_(std::move(labels)), label_names_(std::move(label_names)) {
  if (features_.rows() != labels_.rows()) {
    throw DataError("feature matrix has " + std::to_string(features_.rows()) + " rows but label matrix has " +
                    std::to_string(labels_.rows()));
  }
  if (label_names_.empty()) throw DataError("dataset must have at least one label");
  if (static_cast<std::size_t>(labels_.cols()) != label_names_.size()) {
    throw DataError("label matrix has " + std::to_string(labels_.cols()) + " columns but " +
                    std::to_string(label_names_.size()) + " label names were given");
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : label_names_) {
    if (!seen.insert(name).second) throw DataError("duplicate label name '" + name + "'");
  }
  for (Eigen::Index i = 0; i < labels_.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels_.cols(); ++j) {
      if (labels_(i, j) > 1) {
        throw DataError("label entry at row " + std::to_string(i) + ", column " + std::to_string(j) + " is not 0/1");
      }
    }
  }
}

LabelSet MultiLabelDataset::labelset(std::size_t i) const {
  if (n_labels() > kMaxLabels) throw ConfigError("labelsets need at most 32 labels");
  LabelSet::Bits bits = 0;
  for (std::size_t j = 0; j < n_labels(); ++j) {
    if (labels_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != 0) bits |= LabelSet::Bits{1} << j;
  }
  return LabelSet(bits);
}

std::vector<LabelSet> MultiLabelDataset::labelsets() const {
  std::vector<LabelSet> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(labelset(i));
  return out;
}

std::size_t MultiLabelDataset::positives(std::size_t j) const {
  return static_cast<std::size_t>((labels_.col(static_cast<Eigen::Index>(j)).array() != 0).count());
}

MultiLabelDataset MultiLabelDataset::subset(std::span<const std::size_t> indices) const {
  FeatureMatrix f(static_cast<Eigen::Index>(indices.size()), features_.cols());
  LabelMatrix l(static_cast<Eigen::Index>(indices.size()), labels_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw ConfigError("subset index " + std::to_string(indices[r]) + " out of range");
    f.row(static_cast<Eigen::Index>(r)) = features_.row(static_cast<Eigen::Index>(indices[r]));
    l.row(static_cast<Eigen::Index>(r)) = labels_.row(static_cast<Eigen::Index>(indices[r]));
  }
  return MultiLabelDataset(std::move(f), std::move(l), label_names_);
}

namespace {

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::string where(const fs::path& path, std::size_t line_no) {
  return path.string() + ":" + std::to_string(line_no);
}

enum class AttributeKind { kNumeric, kBinary };

struct Attribute {
  std::string name;
  AttributeKind kind;
};

// Splits "@attribute <name> <type>" into name and type, honouring quoted names.
std::pair<std::string, std::string> split_attribute(std::string_view rest, const fs::path& path, std::size_t line_no) {
  rest = trim(rest);
  std::string name;
  if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
    const char quote = rest.front();
    const auto close = rest.find(quote, 1);
    if (close == std::string_view::npos) throw DataError(where(path, line_no) + ": unterminated quoted attribute name");
    name = std::string(rest.substr(1, close - 1));
    rest = rest.substr(close + 1);
  } else {
    const auto space = rest.find_first_of(" \t");
    if (space == std::string_view::npos) throw DataError(where(path, line_no) + ": attribute declaration lacks a type");
    name = std::string(rest.substr(0, space));
    rest = rest.substr(space);
  }
  const auto type = trim(rest);
  if (name.empty() || type.empty()) throw DataError(where(path, line_no) + ": malformed attribute declaration");
  return {name, std::string(type)};
}

AttributeKind parse_attribute_type(const std::string& type, const std::string& name, const fs::path& path,
                                   std::size_t line_no) {
  const auto t = detail::lower(type);
  if (t == "numeric" || t == "real" || t == "integer") return AttributeKind::kNumeric;
  if (!t.empty() && t.front() == '{' && t.back() == '}') {
    std::vector<std::string> values;
    for (auto v : detail::split(std::string_view(t).substr(1, t.size() - 2), ',')) {
      values.emplace_back(detail::unquote(trim(v)));
    }
    std::sort(values.begin(), values.end());
    if (values == std::vector<std::string>{"0", "1"}) return AttributeKind::kBinary;
    throw DataError(where(path, line_no) + ": attribute '" + name + "' has unsupported nominal domain " + type);
  }
  throw DataError(where(path, line_no) + ": attribute '" + name + "' has unsupported type '" + type + "'");
}

}  // namespace

std::vector<std::string> read_mulan_labels(const fs::path& xml_path) {
  auto in = open_input(xml_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  static const std::regex label_re(R"re(<label\b[^>]*?\bname\s*=\s*(?:"([^"]*)"|'([^']*)'))re");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), label_re); it != std::sregex_iterator(); ++it) {
    std::string name = (*it)[1].matched ? (*it)[1].str() : (*it)[2].str();
    static const std::pair<const char*, const char*> entities[] = {
        {"&lt;", "<"}, {"&gt;", ">"}, {"&quot;", "\""}, {"&apos;", "'"}, {"&amp;", "&"}};
    for (const auto& [from, to] : entities) {
      for (auto pos = name.find(from); pos != std::string::npos; pos = name.find(from, pos + 1)) {
        name.replace(pos, std::string_view(from).size(), to);
      }
    }
    names.push_back(std::move(name));
  }
  if (names.empty()) throw DataError("'" + xml_path.string() + "' declares no <label> elements");
  return names;
}

MultiLabelDataset load_mulan(const fs::path& arff_path, const fs::path& xml_path) {
  const auto label_names = read_mulan_labels(xml_path);
  auto in = open_input(arff_path);

  std::vector<Attribute> attributes;
  bool in_data = false;
  std::vector<double> feature_values;
  std::vector<std::uint8_t> label_values;
  std::vector<int> label_of_attribute;  // -1 for features
  std::size_t n_rows = 0;
  std::size_t n_features = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '%') continue;

    if (!in_data) {
      if (detail::iequals_prefix(body, "@relation")) continue;
      if (detail::iequals_prefix(body, "@attribute")) {
        auto [name, type] = split_attribute(body.substr(10), arff_path, line_no);
        attributes.push_back({name, parse_attribute_type(type, name, arff_path, line_no)});
        continue;
      }
      if (detail::iequals_prefix(body, "@data")) {
        if (attributes.empty()) throw DataError(where(arff_path, line_no) + ": @data before any @attribute");
        std::unordered_map<std::string, std::size_t> position;
        for (std::size_t a = 0; a < attributes.size(); ++a) {
          if (!position.emplace(attributes[a].name, a).second) {
            throw DataError(arff_path.string() + ": duplicate attribute '" + attributes[a].name + "'");
          }
        }
        label_of_attribute.assign(attributes.size(), -1);
        for (std::size_t j = 0; j < label_names.size(); ++j) {
          const auto it = position.find(label_names[j]);
          if (it == position.end()) {
            throw DataError(arff_path.string() + ": label '" + label_names[j] + "' from '" + xml_path.string() +
                            "' is not an ARFF attribute");
          }
          if (attributes[it->second].kind != AttributeKind::kBinary) {
            throw DataError(arff_path.string() + ": label attribute '" + label_names[j] + "' is not nominal {0,1}");
          }
          if (label_of_attribute[it->second] != -1) {
            throw DataError(xml_path.string() + ": label '" + label_names[j] + "' listed twice");
          }
          label_of_attribute[it->second] = static_cast<int>(j);
        }
        n_features = attributes.size() - label_names.size();
        in_data = true;
        continue;
      }
      throw DataError(where(arff_path, line_no) + ": unexpected header line '" + std::string(body) + "'");
    }

    if (body.front() == '{') throw DataError(where(arff_path, line_no) + ": sparse ARFF rows are not supported");
    const auto cells = detail::split(body, ',');
    if (cells.size() != attributes.size()) {
      throw DataError(where(arff_path, line_no) + ": expected " + std::to_string(attributes.size()) +
                      " values, found " + std::to_string(cells.size()));
    }
    const std::size_t row_offset_f = feature_values.size();
    const std::size_t row_offset_l = label_values.size();
    feature_values.resize(row_offset_f + n_features);
    label_values.resize(row_offset_l + label_names.size());
    std::size_t feature_col = 0;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      const auto cell = detail::unquote(trim(cells[a]));
      if (cell == "?") throw DataError(where(arff_path, line_no) + ": missing value in '" + attributes[a].name + "'");
      if (label_of_attribute[a] >= 0) {
        if (cell != "0" && cell != "1") {
          throw DataError(where(arff_path, line_no) + ": label '" + attributes[a].name + "' has value '" +
                          std::string(cell) + "', expected 0 or 1");
        }
        label_values[row_offset_l + static_cast<std::size_t>(label_of_attribute[a])] = cell == "1" ? 1 : 0;
      } else {
        const auto value = detail::parse_double(cell);
        if (!value) {
          throw DataError(where(arff_path, line_no) + ": attribute '" + attributes[a].name + "' value '" +
                          std::string(cell) + "' is not numeric");
        }
        feature_values[row_offset_f + feature_col++] = *value;
      }
    }
    ++n_rows;
  }
  if (!in_data) throw DataError(arff_path.string() + ": no @data section");

  FeatureMatrix features = Eigen::Map<FeatureMatrix>(feature_values.data(), static_cast<Eigen::Index>(n_rows),
                                                     static_cast<Eigen::Index>(n_features));
  LabelMatrix labels = Eigen::Map<LabelMatrix>(label_values.data(), static_cast<Eigen::Index>(n_rows),
                                               static_cast<Eigen::Index>(label_names.size()));
  return MultiLabelDataset(std::move(features), std::move(labels), label_names);
}

MultiLabelDataset load_csv(const fs::path& features_path, const fs::path& labels_path) {
  std::vector<double> feature_values;
  std::size_t n_rows = 0;
  std::size_t n_features = 0;
  {
    auto in = open_input(features_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto body = trim(line);
      if (body.empty()) continue;
      const auto cells = detail::split(body, ',');
      if (n_rows == 0) {
        n_features = cells.size();
      } else if (cells.size() != n_features) {
        throw DataError(where(features_path, line_no) + ": expected " + std::to_string(n_features) + " columns, found " +
                        std::to_string(cells.size()));
      }
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto value = detail::parse_double(cells[c]);
        if (!value) {
          throw DataError(where(features_path, line_no) + ", column " + std::to_string(c + 1) + ": cannot parse '" +
                          std::string(trim(cells[c])) + "' as a number");
        }
        feature_values.push_back(*value);
      }
      ++n_rows;
    }
  }

  std::vector<std::string> names;
  std::vector<std::uint8_t> label_values;
  std::size_t n_label_rows = 0;
  {
    auto in = open_input(labels_path);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
      ++line_no;
      const auto body = trim(line);
      if (!have_header) {
        if (body.empty()) throw DataError(where(labels_path, line_no) + ": empty label header");
        for (auto cell : detail::split(body, ',')) {
          const auto name = trim(cell);
          if (name.empty()) throw DataError(where(labels_path, line_no) + ": empty label name in header");
          names.emplace_back(name);
        }
        have_header = true;
        continue;
      }
      if (body.empty()) continue;
      const auto cells = detail::split(body, ',');
      if (cells.size() != names.size()) {
        throw DataError(where(labels_path, line_no) + ": expected " + std::to_string(names.size()) + " columns, found " +
                        std::to_string(cells.size()));
      }
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto cell = trim(cells[c]);
        if (cell != "0" && cell != "1") {
          throw DataError(where(labels_path, line_no) + ", column " + std::to_string(c + 1) + ": label value '" +
                          std::string(cell) + "' is not 0 or 1");
        }
        label_values.push_back(cell == "1" ? 1 : 0);
      }
      ++n_label_rows;
    }
    if (!have_header) throw DataError(labels_path.string() + ": empty label header");
  }
  if (n_label_rows != n_rows) {
    throw DataError("'" + features_path.string() + "' has " + std::to_string(n_rows) + " rows but '" +
                    labels_path.string() + "' has " + std::to_string(n_label_rows));
  }

  FeatureMatrix features = Eigen::Map<FeatureMatrix>(feature_values.data(), static_cast<Eigen::Index>(n_rows),
                                                     static_cast<Eigen::Index>(n_features));
  LabelMatrix labels = Eigen::Map<LabelMatrix>(label_values.data(), static_cast<Eigen::Index>(n_rows),
                                               static_cast<Eigen::Index>(names.size()));
  return MultiLabelDataset(std::move(features), std::move(labels), std::move(names));
}

void write_csv(const MultiLabelDataset& data, const fs::path& features_path, const fs::path& labels_path) {
  std::ofstream f(features_path, std::ios::binary);
  std::ofstream l(labels_path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + features_path.string() + "'");
  if (!l) throw DataError("cannot write '" + labels_path.string() + "'");

  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto row = data.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) f << ',';
      f << detail::format_double(row[c]);
    }
    f << '\n';
  }

  const auto& names = data.label_names();
  for (std::size_t j = 0; j < names.size(); ++j) l << (j ? "," : "") << names[j];
  l << '\n';
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      l << (j ? "," : "") << static_cast<int>(data.labels()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    l << '\n';
  }
  if (!f || !l) throw DataError("write failed for CSV dataset");
}

}  // namespace mlccp
