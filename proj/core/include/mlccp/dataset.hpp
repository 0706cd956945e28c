#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mlccp/label_set.hpp"

namespace mlccp {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using LabelMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Feature matrix plus binary label matrix. Immutable after construction;
// the constructor enforces matching row counts, {0,1} labels and distinct
// label names.
class MultiLabelDataset {
 public:
  MultiLabelDataset(FeatureMatrix features, LabelMatrix labels, std::vector<std::string> label_names);

  std::size_t size() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t n_features() const { return static_cast<std::size_t>(features_.cols()); }
  std::size_t n_labels() const { return label_names_.size(); }

  const FeatureMatrix& features() const { return features_; }
  const LabelMatrix& labels() const { return labels_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * n_features(), n_features()};
  }

  // Labels of instance i as a bitmask. Requires n_labels() <= kMaxLabels.
  LabelSet labelset(std::size_t i) const;
  std::vector<LabelSet> labelsets() const;

  // Number of instances carrying label j.
  std::size_t positives(std::size_t j) const;

  // Rows `indices` in the given order.
  MultiLabelDataset subset(std::span<const std::size_t> indices) const;

 private:
  FeatureMatrix features_;
  LabelMatrix labels_;
  std::vector<std::string> label_names_;
};

// Mulan dataset: dense ARFF with numeric features and {0,1} label attributes,
// plus an XML file listing the label attributes in order.
MultiLabelDataset load_mulan(const std::filesystem::path& arff_path, const std::filesystem::path& xml_path);

// Label names declared by a Mulan label XML, in document order.
std::vector<std::string> read_mulan_labels(const std::filesystem::path& xml_path);

// Headerless feature CSV plus a label CSV whose header row names the labels.
MultiLabelDataset load_csv(const std::filesystem::path& features_path, const std::filesystem::path& labels_path);

// Inverse of load_csv. Features are written in shortest round-trip form so
// they re-load to identical doubles.
void write_csv(const MultiLabelDataset& data, const std::filesystem::path& features_path,
               const std::filesystem::path& labels_path);

}  // namespace mlccp
