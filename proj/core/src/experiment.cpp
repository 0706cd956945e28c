#include "mlccp/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mlccp/error.hpp"
#include "mlccp/folds.hpp"
#include "mlccp/prediction.hpp"
#include "mlccp/serialization.hpp"
#include "parallel.hpp"

namespace mlccp {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  measure.validate();
  rbf.validate();
  if (folds && *folds < 2) throw ConfigError("--folds must be at least 2");
  if (confidence.empty()) throw ConfigError("at least one confidence level is required");
  for (double c : confidence) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("confidence levels must lie in (0, 1)");
  }
  if (train.primary.empty() || test.primary.empty()) throw ConfigError("--train and --test are required");
  if (format == DataFormat::kMulan && labels_xml.empty()) throw ConfigError("--labels-xml is required for Mulan data");
  if (format == DataFormat::kCsv && (train.labels.empty() || test.labels.empty())) {
    throw ConfigError("CSV data needs a features file and a labels file per split");
  }
  if (threads == 0) throw ConfigError("--threads must be positive");
}

MultiLabelDataset load_split(const ExperimentConfig& config, const DataSource& source) {
  if (config.format == DataFormat::kMulan) return load_mulan(source.primary, config.labels_xml);
  return load_csv(source.primary, source.labels);
}

std::string dataset_checksum(const MultiLabelDataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](const void* bytes, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ull;
    }
  };
  const std::uint64_t dims[3] = {data.size(), data.n_features(), data.n_labels()};
  mix(dims, sizeof(dims));
  mix(data.features().data(), static_cast<std::size_t>(data.features().size()) * sizeof(double));
  mix(data.labels().data(), static_cast<std::size_t>(data.labels().size()));
  for (const auto& name : data.label_names()) mix(name.c_str(), name.size() + 1);
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
  return buffer;
}

std::vector<ReferenceRow> reference_rows(const std::string& dataset_name) {
  if (dataset_name == "scene") {
    return {{"ML-RBF CCP, lambda=0 (published)", {0.0928, 0.6798, 0.7417, 0.7363}},
            {"ML-RBF CCP, lambda=1 (published)", {0.0927, 0.6831, 0.7410, 0.7358}},
            {"ML-RBF (published)", {0.0959, 0.5468, 0.6922, 0.6890}},
            {"BP-MLL (published)", {0.2903, 0.1630, 0.0509, 0.1665}},
            {"ML-kNN (published)", {0.0953, 0.6012, 0.7189, 0.7183}},
            {"ML-NB (published)", {0.1309, 0.4105, 0.6230, 0.6221}}};
  }
  if (dataset_name == "yeast") {
    return {{"ML-RBF CCP, lambda=0 (published)", {0.1954, 0.1821, 0.3896, 0.6432}},
            {"ML-RBF CCP, lambda=1 (published)", {0.1954, 0.1821, 0.3896, 0.6432}},
            {"ML-RBF (published)", {0.1970, 0.1865, 0.3891, 0.6407}},
            {"BP-MLL (published)", {0.2272, 0.0960, 0.3047, 0.6212}},
            {"ML-kNN (published)", {0.1980, 0.1658, 0.3567, 0.6360}},
            {"ML-NB (published)", {0.2115, 0.1254, 0.3428, 0.6152}}};
  }
  return {};
}

namespace {

std::string infer_dataset_name(const ExperimentConfig& config) {
  if (!config.dataset_name.empty()) return config.dataset_name;
  std::string stem = config.train.primary.filename().string();
  std::transform(stem.begin(), stem.end(), stem.begin(), [](unsigned char c) { return std::tolower(c); });
  for (const char* known : {"scene", "yeast"}) {
    if (stem.find(known) != std::string::npos) return known;
  }
  return "custom";
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const MultiLabelDataset& train,
                                const MultiLabelDataset& test, std::optional<CcpModel>* model_out) {
  config.measure.validate();
  config.rbf.validate();
  if (train.n_labels() != test.n_labels() || train.label_names() != test.label_names()) {
    throw DataError("training and test sets have different labels");
  }
  if (train.n_features() != test.n_features()) {
    throw DataError("training set has " + std::to_string(train.n_features()) + " features, test set has " +
                    std::to_string(test.n_features()));
  }
  if (test.size() == 0) throw DataError("test set is empty");

  ExperimentResult result;
  result.dataset_name = infer_dataset_name(config);
  result.train_size = train.size();
  result.test_size = test.size();
  result.n_features = train.n_features();
  result.label_names = train.label_names();
  result.train_checksum = dataset_checksum(train);
  result.test_checksum = dataset_checksum(test);

  const std::size_t k = config.folds.value_or(auto_fold_count(train.size()));
  result.folds = k;

  RbfConfig rbf = config.rbf;
  rbf.seed = config.seed;
  const auto folds = make_folds(train.size(), k, config.seed);
  const auto ccp = train_ccp(train, folds, rbf, config.measure, config.threads);
  const auto full = train_rbf(train, rbf);
  for (const auto& m : ccp.fold_models()) {
    result.warnings.insert(result.warnings.end(), m.warnings().begin(), m.warnings().end());
  }
  result.warnings.insert(result.warnings.end(), full.warnings().begin(), full.warnings().end());

  const std::size_t g = test.size();
  std::vector<std::optional<PValueTable>> tables(g);
  std::vector<LabelSet> native(g);
  detail::parallel_for(g, config.threads, [&](std::size_t i) {
    tables[i].emplace(p_values(ccp, test.row(i)));
    native[i] = native_prediction(full, test.row(i));
  });

  std::vector<PValueTable> all_tables;
  all_tables.reserve(g);
  for (auto& t : tables) all_tables.push_back(std::move(*t));

  const auto truth = test.labelsets();
  std::vector<LabelSet> forced_sets(g);
  double confidence_sum = 0.0;
  double credibility_sum = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    const auto f = forced(all_tables[i]);
    forced_sets[i] = f.labelset;
    confidence_sum += f.confidence;
    credibility_sum += f.credibility;
  }
  result.mean_confidence = confidence_sum / static_cast<double>(g);
  result.mean_credibility = credibility_sum / static_cast<double>(g);

  const auto n = train.n_labels();
  result.ccp = evaluate_single(truth, forced_sets, n, config.f_convention);
  result.native = evaluate_single(truth, native, n, config.f_convention);
  for (double c : config.confidence) {
    // 1 - 0.9 is 0.09999999999999998 in binary; snap to the nearest short decimal.
    const double delta = std::round((1.0 - c) * 1e12) / 1e12;
    result.set_reports.push_back({c, set_report(all_tables, truth, delta)});
  }
  if (model_out) model_out->emplace(ccp);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto train = load_split(config, config.train);
  const auto test = load_split(config, config.test);
  std::optional<CcpModel> model;
  auto result = run_experiment(config, train, test, config.save_model.empty() ? nullptr : &model);
  write_reports(config, result);
  if (model) {
    if (config.save_model.has_parent_path()) fs::create_directories(config.save_model.parent_path());
    save_ccp(*model, config.save_model);
  }
  return result;
}

namespace {

nlohmann::json metrics_json(const SingleMetrics& m) {
  return {{"hamming_loss", m.hamming_loss}, {"accuracy", m.accuracy}, {"f_macro", m.f_macro}, {"f_micro", m.f_micro}};
}

std::string fixed(double v, int digits) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

const char* format_name(DataFormat f) { return f == DataFormat::kMulan ? "mulan" : "csv"; }

}  // namespace

nlohmann::json report_json(const ExperimentConfig& config, const ExperimentResult& result) {
  nlohmann::json j;
  j["dataset"] = {{"name", result.dataset_name},
                  {"format", format_name(config.format)},
                  {"train_size", result.train_size},
                  {"test_size", result.test_size},
                  {"features", result.n_features},
                  {"labels", result.label_names},
                  {"train_checksum", result.train_checksum},
                  {"test_checksum", result.test_checksum}};
  j["config"] = {{"folds", result.folds},
                 {"folds_auto", !config.folds.has_value()},
                 {"d", config.measure.d},
                 {"lambda", config.measure.lambda},
                 {"fraction", config.rbf.fraction},
                 {"scaling", config.rbf.scaling},
                 {"ridge", config.rbf.ridge},
                 {"kmeans_iters", config.rbf.kmeans_iters},
                 {"standardize", config.rbf.standardize},
                 {"seed", config.seed},
                 {"f_empty_convention", config.f_convention == EmptyFConvention::kOne ? "one" : "zero"},
                 {"confidence", config.confidence}};
  j["single_prediction"] = {{"ccp_forced", metrics_json(result.ccp)},
                            {"mlrbf_native", metrics_json(result.native)},
                            {"mean_confidence", result.mean_confidence},
                            {"mean_credibility", result.mean_credibility}};
  auto sets = nlohmann::json::array();
  for (const auto& r : result.set_reports) {
    auto bins = nlohmann::json::array();
    for (std::size_t b = 0; b < r.sets.bin_counts.size(); ++b) {
      bins.push_back({{"sizes", bin_label(b)}, {"count", r.sets.bin_counts[b]}, {"fraction", r.sets.bin_fraction(b)}});
    }
    sets.push_back({{"confidence", r.confidence},
                    {"delta", r.sets.delta},
                    {"instances", r.sets.instances},
                    {"errors", r.sets.errors},
                    {"error_rate", r.sets.error_rate()},
                    {"bins", std::move(bins)}});
  }
  j["prediction_sets"] = std::move(sets);
  auto refs = nlohmann::json::array();
  for (const auto& row : reference_rows(result.dataset_name)) {
    refs.push_back({{"method", row.method}, {"metrics", metrics_json(row.metrics)}});
  }
  j["reference"] = {{"note", "published values, not computed by this run"}, {"rows", std::move(refs)}};
  j["warnings"] = result.warnings;
  return j;
}

std::string report_text(const ExperimentConfig& config, const ExperimentResult& result) {
  std::ostringstream out;
  out << "Dataset: " << result.dataset_name << " (" << result.train_size << " train, " << result.test_size
      << " test, " << result.n_features << " features, " << result.label_names.size() << " labels)\n";
  out << "Folds: " << result.folds << "  d: " << config.measure.d << "  lambda: " << config.measure.lambda
      << "  fraction: " << config.rbf.fraction << "  scaling: " << config.rbf.scaling << "  seed: " << config.seed
      << "\n\n";

  const std::size_t name_w = 36;
  out << pad("Algorithm", name_w, true) << pad("HL", 9) << pad("CA", 9) << pad("F_macro", 9) << pad("F_micro", 9)
      << '\n';
  auto row = [&](const std::string& name, const SingleMetrics& m) {
    out << pad(name, name_w, true) << pad(fixed(m.hamming_loss, 4), 9) << pad(fixed(m.accuracy, 4), 9)
        << pad(fixed(m.f_macro, 4), 9) << pad(fixed(m.f_micro, 4), 9) << '\n';
  };
  row("ML-RBF CCP (this run)", result.ccp);
  row("ML-RBF (this run)", result.native);
  for (const auto& ref : reference_rows(result.dataset_name)) row(ref.method, ref.metrics);
  out << "Mean confidence: " << fixed(result.mean_confidence, 4)
      << "  mean credibility: " << fixed(result.mean_credibility, 4) << "\n\n";

  if (!result.set_reports.empty()) {
    out << pad("# of labelsets", 18, true);
    for (const auto& r : result.set_reports) out << pad(fixed(100.0 * r.confidence, 0) + "%", 10);
    out << '\n';
    const auto n_bins = result.set_reports.front().sets.bin_counts.size();
    for (std::size_t b = 0; b < n_bins; ++b) {
      bool any = false;
      for (const auto& r : result.set_reports) any = any || r.sets.bin_counts[b] > 0;
      if (!any) continue;
      out << pad(bin_label(b), 18, true);
      for (const auto& r : result.set_reports) out << pad(fixed(100.0 * r.sets.bin_fraction(b), 2) + "%", 10);
      out << '\n';
    }
    out << pad("Errors", 18, true);
    for (const auto& r : result.set_reports) out << pad(fixed(100.0 * r.sets.error_rate(), 2) + "%", 10);
    out << '\n';
  }
  for (const auto& w : result.warnings) out << "warning: " << w << '\n';
  return out.str();
}

std::string report_metrics_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "method,hamming_loss,accuracy,f_macro,f_micro,computed\n";
  auto row = [&](const std::string& name, const SingleMetrics& m, bool computed) {
    out << '"' << name << "\"," << fixed(m.hamming_loss, 6) << ',' << fixed(m.accuracy, 6) << ','
        << fixed(m.f_macro, 6) << ',' << fixed(m.f_micro, 6) << ',' << (computed ? "yes" : "no") << '\n';
  };
  row("ML-RBF CCP", result.ccp, true);
  row("ML-RBF", result.native, true);
  for (const auto& ref : reference_rows(result.dataset_name)) row(ref.method, ref.metrics, false);
  return out.str();
}

std::string report_sets_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "confidence,sizes,count,fraction\n";
  for (const auto& r : result.set_reports) {
    for (std::size_t b = 0; b < r.sets.bin_counts.size(); ++b) {
      out << fixed(r.confidence, 4) << ',' << bin_label(b) << ',' << r.sets.bin_counts[b] << ','
          << fixed(r.sets.bin_fraction(b), 6) << '\n';
    }
    out << fixed(r.confidence, 4) << ",errors," << r.sets.errors << ',' << fixed(r.sets.error_rate(), 6) << '\n';
  }
  return out.str();
}

void write_reports(const ExperimentConfig& config, const ExperimentResult& result) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(config.out_dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (config.out_dir / name).string() + "'");
    out << body;
  };
  for (auto format : config.reports) {
    switch (format) {
      case ReportFormat::kJson:
        write("report.json", report_json(config, result).dump(2) + "\n");
        break;
      case ReportFormat::kCsv:
        write("single_metrics.csv", report_metrics_csv(result));
        write("prediction_sets.csv", report_sets_csv(result));
        break;
      case ReportFormat::kText:
        write("report.txt", report_text(config, result));
        break;
    }
  }
}

}  // namespace mlccp
