#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mlccp/conformal.hpp"
#include "mlccp/dataset.hpp"
#include "mlccp/metrics.hpp"
#include "mlccp/mlrbf.hpp"

namespace mlccp {

enum class DataFormat { kMulan, kCsv };
enum class ReportFormat { kJson, kCsv, kText };

// Location of one split. Mulan: `primary` is the ARFF file and the label XML
// comes from ExperimentConfig::labels_xml. CSV: `primary` holds features and
// `labels` the label table.
struct DataSource {
  std::filesystem::path primary;
  std::filesystem::path labels;
};

struct ExperimentConfig {
  DataFormat format = DataFormat::kMulan;
  DataSource train;
  DataSource test;
  std::filesystem::path labels_xml;
  // Unset: round(l / 100).
  std::optional<std::size_t> folds;
  MeasureParams measure;
  RbfConfig rbf;
  std::uint64_t seed = 1;
  std::vector<double> confidence = {0.95, 0.90, 0.80};
  EmptyFConvention f_convention = EmptyFConvention::kOne;
  std::filesystem::path out_dir = "mlccp-report";
  std::vector<ReportFormat> reports = {ReportFormat::kJson, ReportFormat::kText};
  // Worker threads for fold training and test scoring; results do not depend on it.
  std::size_t threads = 1;
  // Written when non-empty.
  std::filesystem::path save_model;
  // Dataset name for reference rows ("scene", "yeast"); empty to infer from the
  // training path.
  std::string dataset_name;

  void validate() const;
};

struct ConfidenceReport {
  double confidence = 0.0;
  SetReport sets;
};

struct ExperimentResult {
  std::string dataset_name;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t n_features = 0;
  std::vector<std::string> label_names;
  std::string train_checksum;
  std::string test_checksum;
  std::size_t folds = 0;
  SingleMetrics ccp;
  SingleMetrics native;
  // Mean confidence / credibility of the forced predictions.
  double mean_confidence = 0.0;
  double mean_credibility = 0.0;
  std::vector<ConfidenceReport> set_reports;
  std::vector<std::string> warnings;
};

// Trains on `train`, evaluates on `test`. Pure: no files are touched.
ExperimentResult run_experiment(const ExperimentConfig& config, const MultiLabelDataset& train,
                                const MultiLabelDataset& test, std::optional<CcpModel>* model_out = nullptr);

// Loads both splits, runs, and writes the requested reports into out_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

MultiLabelDataset load_split(const ExperimentConfig& config, const DataSource& source);

// Report bodies. Reports contain no timings, paths or thread counts, so equal
// inputs give byte-identical output.
nlohmann::json report_json(const ExperimentConfig& config, const ExperimentResult& result);
std::string report_text(const ExperimentConfig& config, const ExperimentResult& result);
std::string report_metrics_csv(const ExperimentResult& result);
std::string report_sets_csv(const ExperimentResult& result);

void write_reports(const ExperimentConfig& config, const ExperimentResult& result);

// FNV-1a 64 over features, labels and label names, as 16 hex digits.
std::string dataset_checksum(const MultiLabelDataset& data);

// Published single-prediction results of comparison methods; report constants
// only. Empty for unknown datasets.
struct ReferenceRow {
  const char* method;
  SingleMetrics metrics;
};
std::vector<ReferenceRow> reference_rows(const std::string& dataset_name);

}  // namespace mlccp
