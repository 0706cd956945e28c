#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlccp/error.hpp"
#include "mlccp/experiment.hpp"
#include "mlccp/prediction.hpp"
#include "mlccp/synthetic.hpp"

using namespace mlccp;
namespace fs = std::filesystem;

namespace {

std::pair<MultiLabelDataset, MultiLabelDataset> data() {
  SyntheticSpec spec;
  spec.n_train = 300;
  spec.n_test = 150;
  spec.seed = 3;
  return make_synthetic(spec);
}

ExperimentConfig config() {
  ExperimentConfig c;
  c.format = DataFormat::kCsv;
  c.rbf.fraction = 0.05;
  c.dataset_name = "synthetic";
  c.train = {"train-x.csv", "train-y.csv"};
  c.test = {"test-x.csv", "test-y.csv"};
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("reports do not depend on the thread count") {
  const auto [train, test] = data();
  auto c = config();
  c.threads = 1;
  const auto a = run_experiment(c, train, test);
  c.threads = 4;
  const auto b = run_experiment(c, train, test);
  CHECK(report_json(c, a).dump(2) == report_json(c, b).dump(2));
  CHECK(report_text(c, a) == report_text(c, b));
  CHECK(report_sets_csv(a) == report_sets_csv(b));
}

TEST_CASE("experiment result structure") {
  const auto [train, test] = data();
  auto c = config();
  std::optional<CcpModel> model;
  const auto r = run_experiment(c, train, test, &model);
  REQUIRE(model.has_value());
  CHECK(model->l() == train.size());
  CHECK(r.folds == 3);  // round(300 / 100)
  CHECK(r.train_size == 300);
  CHECK(r.test_size == 150);
  CHECK(r.train_checksum == dataset_checksum(train));
  CHECK(r.train_checksum != r.test_checksum);
  REQUIRE(r.set_reports.size() == 3);
  CHECK(r.set_reports[0].sets.delta == 0.05);
  CHECK(r.set_reports[1].sets.delta == 0.1);
  CHECK(r.set_reports[2].sets.delta == 0.2);
  for (const auto& s : r.set_reports) CHECK(s.sets.instances == 150);
  CHECK(r.set_reports[0].sets.errors <= r.set_reports[2].sets.errors);
  CHECK(r.mean_credibility > 0.0);
  CHECK(r.mean_confidence <= 1.0);

  const auto j = report_json(c, r);
  CHECK(j.contains("single_prediction"));
  CHECK(j.contains("prediction_sets"));
  CHECK(report_text(c, r).find("F_macro") != std::string::npos);
}

TEST_CASE("fold count and folds option") {
  const auto [train, test] = data();
  auto c = config();
  c.folds = 5;
  CHECK(run_experiment(c, train, test).folds == 5);
  c.folds = 1;
  CHECK_THROWS_AS(run_experiment(c, train, test), ConfigError);
}

TEST_CASE("configuration checks") {
  auto c = config();
  CHECK_NOTHROW(c.validate());
  c.confidence = {1.2};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config();
  c.confidence = {};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config();
  c.measure.d = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = config();
  c.threads = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("test split must match the training split") {
  const auto [train, test] = data();
  SyntheticSpec other;
  other.n_train = 10;
  other.n_test = 10;
  other.n_labels = 3;
  const auto [x, y] = make_synthetic(other);
  CHECK_THROWS_AS(run_experiment(config(), train, y), DataError);
}

TEST_CASE("reports are written to disk") {
  const auto [train, test] = data();
  const auto dir = fs::temp_directory_path() / "mlccp-experiment-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  write_csv(train, dir / "train-x.csv", dir / "train-y.csv");
  write_csv(test, dir / "test-x.csv", dir / "test-y.csv");
  auto c = config();
  c.train = {dir / "train-x.csv", dir / "train-y.csv"};
  c.test = {dir / "test-x.csv", dir / "test-y.csv"};
  c.out_dir = dir / "out";
  c.reports = {ReportFormat::kJson, ReportFormat::kCsv, ReportFormat::kText};
  c.save_model = dir / "models" / "m.ccp";
  const auto r = run_experiment(c);
  for (const char* f : {"report.json", "single_metrics.csv", "prediction_sets.csv", "report.txt"}) {
    CHECK(fs::exists(c.out_dir / f));
  }
  CHECK(fs::exists(c.save_model));
  CHECK(slurp(c.out_dir / "report.json") == report_json(c, r).dump(2) + "\n");
  fs::remove_all(dir);
}

TEST_CASE("reference rows") {
  CHECK_FALSE(reference_rows("scene").empty());
  CHECK_FALSE(reference_rows("yeast").empty());
  CHECK(reference_rows("synthetic").empty());
}
