// mlccp: cross-conformal multi-label prediction experiments.
//
//   mlccp run      --train scene-train.arff --test scene-test.arff --labels-xml scene.xml --lambda 1
//   mlccp train    --train x.csv,y.csv --format csv --out model.ccp
//   mlccp predict  --model model.ccp --instance 0.1,0.2,... --delta 0.05
//   mlccp generate --out-dir synth --train-size 2000 --test-size 2000
//
// Exit codes: 0 success, 1 configuration error, 2 data error, 3 numeric failure.

#include <CLI11.hpp>
#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mlccp/error.hpp"
#include "mlccp/experiment.hpp"
#include "mlccp/folds.hpp"
#include "mlccp/prediction.hpp"
#include "mlccp/serialization.hpp"
#include "mlccp/synthetic.hpp"

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string train;
  std::string test;
  std::string format = "mulan";
  std::string labels_xml;
  std::string folds = "auto";
  double d = 4.0;
  double lambda = 1.0;
  double fraction = 0.01;
  double scaling = 1.0;
  double ridge = 1e-8;
  std::size_t kmeans_iters = 100;
  bool standardize = false;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
};

void add_common(CLI::App& cmd, CommonOptions& o, bool with_test) {
  cmd.add_option("--train", o.train, "Training split: ARFF file, or FEATURES.csv,LABELS.csv")->required();
  if (with_test) cmd.add_option("--test", o.test, "Test split, same form as --train")->required();
  cmd.add_option("--format", o.format, "Input format")->check(CLI::IsMember({"mulan", "csv"}));
  cmd.add_option("--labels-xml", o.labels_xml, "Mulan label XML (format mulan)");
  cmd.add_option("--folds", o.folds, "Fold count, or 'auto' for round(l/100)");
  cmd.add_option("--d", o.d, "Nonconformity exponent");
  cmd.add_option("--lambda", o.lambda, "Penalty per never-co-occurring label pair");
  cmd.add_option("--fraction", o.fraction, "ML-RBF prototypes per positive instance");
  cmd.add_option("--scaling", o.scaling, "ML-RBF kernel width multiplier");
  cmd.add_option("--ridge", o.ridge, "Ridge term of the output-layer least squares");
  cmd.add_option("--kmeans-iters", o.kmeans_iters, "k-means iteration cap");
  cmd.add_flag("--standardize", o.standardize, "z-score features with training statistics");
  cmd.add_option("--seed", o.seed, "Seed for folds and k-means");
  cmd.add_option("--threads", o.threads, "Worker threads (results do not depend on this)");
}

mlccp::DataSource parse_source(const std::string& spec, mlccp::DataFormat format) {
  if (format == mlccp::DataFormat::kMulan) return {spec, {}};
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw mlccp::ConfigError("CSV splits are given as FEATURES.csv,LABELS.csv");
  return {spec.substr(0, comma), spec.substr(comma + 1)};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw mlccp::ConfigError(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

mlccp::ExperimentConfig make_config(const CommonOptions& o) {
  mlccp::ExperimentConfig c;
  c.format = o.format == "csv" ? mlccp::DataFormat::kCsv : mlccp::DataFormat::kMulan;
  c.train = parse_source(o.train, c.format);
  if (!o.test.empty()) c.test = parse_source(o.test, c.format);
  c.labels_xml = o.labels_xml;
  if (o.folds != "auto") {
    const double k = parse_real(o.folds, "--folds");
    if (k < 2 || k != static_cast<double>(static_cast<std::size_t>(k))) {
      throw mlccp::ConfigError("--folds must be 'auto' or an integer >= 2");
    }
    c.folds = static_cast<std::size_t>(k);
  }
  c.measure = {o.d, o.lambda};
  c.rbf.fraction = o.fraction;
  c.rbf.scaling = o.scaling;
  c.rbf.ridge = o.ridge;
  c.rbf.kmeans_iters = o.kmeans_iters;
  c.rbf.standardize = o.standardize;
  c.rbf.seed = o.seed;
  c.seed = o.seed;
  c.threads = o.threads;
  return c;
}

int run_command(const CommonOptions& o, const std::string& confidence, const std::string& reports,
                const std::string& out_dir, const std::string& dataset_name, const std::string& f_empty,
                const std::string& save_model) {
  auto config = make_config(o);
  config.confidence.clear();
  for (const auto& c : split_list(confidence)) config.confidence.push_back(parse_real(c, "--confidence"));
  config.reports.clear();
  for (const auto& r : split_list(reports)) {
    if (r == "json") config.reports.push_back(mlccp::ReportFormat::kJson);
    else if (r == "csv") config.reports.push_back(mlccp::ReportFormat::kCsv);
    else if (r == "text") config.reports.push_back(mlccp::ReportFormat::kText);
    else throw mlccp::ConfigError("unknown report format '" + r + "' (json, csv, text)");
  }
  config.out_dir = out_dir;
  config.dataset_name = dataset_name;
  config.f_convention = f_empty == "zero" ? mlccp::EmptyFConvention::kZero : mlccp::EmptyFConvention::kOne;
  config.save_model = save_model;

  const auto result = mlccp::run_experiment(config);
  std::cout << mlccp::report_text(config, result);
  std::cout << "reports written to " << config.out_dir.string() << '\n';
  return 0;
}

int train_command(const CommonOptions& o, const std::string& out) {
  auto config = make_config(o);
  config.measure.validate();
  config.rbf.validate();
  if (config.format == mlccp::DataFormat::kMulan && config.labels_xml.empty()) {
    throw mlccp::ConfigError("--labels-xml is required for Mulan data");
  }
  const auto train = mlccp::load_split(config, config.train);
  const auto k = config.folds.value_or(mlccp::auto_fold_count(train.size()));
  const auto folds = mlccp::make_folds(train.size(), k, config.seed);
  const auto model = mlccp::train_ccp(train, folds, config.rbf, config.measure, config.threads);
  mlccp::save_ccp(model, out);
  std::cout << "trained " << model.k() << "-fold model on " << model.l() << " instances, " << model.n_labels()
            << " labels; saved to " << out << '\n';
  return 0;
}

int predict_command(const std::string& model_path, const std::string& instance, double delta, bool have_delta,
                    std::size_t max_members, bool json) {
  if (have_delta && !(delta > 0.0 && delta < 1.0)) throw mlccp::ConfigError("--delta must lie in (0, 1)");
  const auto model = mlccp::load_ccp(model_path);
  std::vector<double> x;
  for (const auto& v : split_list(instance)) x.push_back(parse_real(v, "--instance value"));
  if (x.size() != model.n_features()) {
    throw mlccp::DataError("instance has " + std::to_string(x.size()) + " values, model expects " +
                           std::to_string(model.n_features()));
  }
  const auto table = mlccp::p_values(model, x);
  const auto f = mlccp::forced(table);
  const auto& names = model.label_names();

  if (json) {
    nlohmann::json out;
    out["forced"] = mlccp::to_json(f, names);
    if (have_delta) out["set"] = mlccp::to_json(mlccp::prediction_set(table, delta), names);
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << "prediction:  " << mlccp::to_string(f.labelset, names) << '\n';
  std::cout << "confidence:  " << f.confidence << '\n';
  std::cout << "credibility: " << f.credibility << '\n';
  if (have_delta) {
    const auto set = mlccp::prediction_set(table, delta);
    std::cout << "prediction set at confidence " << 1.0 - delta << ": size " << set.size() << '\n';
    const std::size_t shown = std::min(set.size(), max_members);
    for (std::size_t i = 0; i < shown; ++i) {
      std::cout << "  " << mlccp::to_string(set.members[i], names) << "  p=" << table.p(set.members[i]) << '\n';
    }
    if (shown < set.size()) std::cout << "  ... and " << set.size() - shown << " more\n";
  }
  return 0;
}

int generate_command(const mlccp::SyntheticSpec& spec, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto [train, test] = mlccp::make_synthetic(spec);
  const std::filesystem::path dir(out_dir);
  mlccp::write_csv(train, dir / "train-features.csv", dir / "train-labels.csv");
  mlccp::write_csv(test, dir / "test-features.csv", dir / "test-labels.csv");
  std::cout << "wrote " << train.size() << " training and " << test.size() << " test instances to " << out_dir
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-conformal multi-label prediction with an ML-RBF underlying model"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  std::string confidence = "0.95,0.9,0.8";
  std::string reports = "json,text";
  std::string out_dir = "mlccp-report";
  std::string dataset_name;
  std::string f_empty = "one";
  std::string save_model;
  auto* run = app.add_subcommand("run", "Train, evaluate on the test split and write reports");
  add_common(*run, run_opts, true);
  run->add_option("--confidence", confidence, "Comma-separated confidence levels");
  run->add_option("--out", out_dir, "Report directory");
  run->add_option("--report", reports, "Comma-separated report formats: json, csv, text");
  run->add_option("--dataset-name", dataset_name, "Name used for published reference rows (scene, yeast)");
  run->add_option("--f-empty", f_empty, "F-measure value for a label never present nor predicted")
      ->check(CLI::IsMember({"one", "zero"}));
  run->add_option("--save-model", save_model, "Also write the trained model here");

  CommonOptions train_opts;
  std::string model_out;
  auto* train = app.add_subcommand("train", "Train a cross-conformal model and save it");
  add_common(*train, train_opts, false);
  train->add_option("--out", model_out, "Model file")->required();

  std::string model_path;
  std::string instance;
  double delta = 0.0;
  std::size_t max_members = 20;
  bool json = false;
  auto* predict = app.add_subcommand("predict", "p-values for one instance from a saved model");
  predict->add_option("--model", model_path, "Model file")->required();
  predict->add_option("--instance", instance, "Comma-separated feature values")->required();
  auto* delta_opt = predict->add_option("--delta", delta, "Significance level for the prediction set");
  predict->add_option("--max-members", max_members, "Prediction-set members to list");
  predict->add_flag("--json", json, "Print JSON");

  mlccp::SyntheticSpec spec;
  std::string gen_dir;
  auto* generate = app.add_subcommand("generate", "Write a synthetic i.i.d. dataset as CSV");
  generate->add_option("--out-dir", gen_dir, "Output directory")->required();
  generate->add_option("--train-size", spec.n_train);
  generate->add_option("--test-size", spec.n_test);
  generate->add_option("--labels", spec.n_labels);
  generate->add_option("--features", spec.n_features);
  generate->add_option("--noise", spec.noise);
  generate->add_option("--seed", spec.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return run_command(run_opts, confidence, reports, out_dir, dataset_name, f_empty, save_model);
    if (*train) return train_command(train_opts, model_out);
    if (*predict) return predict_command(model_path, instance, delta, delta_opt->count() > 0, max_members, json);
    if (*generate) return generate_command(spec, gen_dir);
  } catch (const mlccp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const mlccp::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const mlccp::NumericError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
