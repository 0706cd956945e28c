#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlccp/error.hpp"
#include "mlccp/mlrbf.hpp"
#include "mlccp/random.hpp"
#include "oracles.hpp"

using namespace mlccp;

namespace {

// Two Gaussian clouds in 2-D; label 0 on the first, label 1 on the second.
MultiLabelDataset two_clouds(std::size_t per_cloud, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(2 * per_cloud);
  FeatureMatrix x(n, 2);
  LabelMatrix y = LabelMatrix::Zero(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool second = i >= static_cast<Eigen::Index>(per_cloud);
    const double cx = second ? 4.0 : -4.0;
    x(i, 0) = cx + 0.5 * rng.normal();
    x(i, 1) = 0.5 * rng.normal();
    y(i, second ? 1 : 0) = 1;
  }
  return {x, y, {"left", "right"}};
}

}  // namespace

TEST_CASE("prototype counts") {
  CHECK(prototype_count(0.01, 1) == 1);
  CHECK(prototype_count(0.01, 100) == 1);
  CHECK(prototype_count(0.01, 101) == 2);
  CHECK(prototype_count(0.1, 50) == 5);
  CHECK(prototype_count(1.0, 7) == 7);
}

TEST_CASE("output weights solve the ridge least-squares problem") {
  const auto data = two_clouds(20, 5);
  RbfConfig config;
  config.fraction = 0.1;
  config.ridge = 1e-6;
  const auto model = train_rbf(data, config);
  REQUIRE(model.n_units() == 4);
  CHECK(model.units_per_label() == std::vector<std::size_t>{2, 2});

  // Width from the definition.
  double total = 0.0;
  std::size_t pairs = 0;
  for (Eigen::Index a = 0; a < model.centers().rows(); ++a) {
    for (Eigen::Index b = a + 1; b < model.centers().rows(); ++b) {
      total += (model.centers().row(a) - model.centers().row(b)).norm();
      ++pairs;
    }
  }
  CHECK(model.width() == doctest::Approx(total / static_cast<double>(pairs)).epsilon(1e-14));

  std::vector<std::vector<double>> design;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::vector<double> row;
    for (Eigen::Index u = 0; u < model.centers().rows(); ++u) {
      double sq = 0.0;
      for (Eigen::Index c = 0; c < 2; ++c) {
        const double diff = data.features()(static_cast<Eigen::Index>(i), c) - model.centers()(u, c);
        sq += diff * diff;
      }
      row.push_back(std::exp(-sq / (2.0 * model.width() * model.width())));
    }
    row.push_back(1.0);
    const auto act = model.activations(data.row(i));
    for (std::size_t u = 0; u < row.size(); ++u) CHECK(act(static_cast<Eigen::Index>(u)) == doctest::Approx(row[u]));
    design.push_back(row);
  }
  for (std::size_t j = 0; j < 2; ++j) {
    std::vector<double> target;
    for (std::size_t i = 0; i < data.size(); ++i) {
      target.push_back(data.labels()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) ? 1.0 : -1.0);
    }
    const auto w = oracle::ridge_least_squares(design, target, config.ridge);
    for (std::size_t u = 0; u < w.size(); ++u) {
      CHECK(model.weights()(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(j)) ==
            doctest::Approx(w[u]).epsilon(1e-6));
    }
  }

  // Each cloud is recognised by its own label.
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(native_prediction(model, data.row(i)) == data.labelset(i));
  }
}

TEST_CASE("property: perturbing least-squares weights never lowers the objective") {
  const auto data = two_clouds(10, 17);
  RbfConfig config;
  config.fraction = 0.2;
  config.ridge = 1e-8;
  const auto model = train_rbf(data, config);
  Eigen::MatrixXd phi(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(model.n_units() + 1));
  for (std::size_t i = 0; i < data.size(); ++i) phi.row(static_cast<Eigen::Index>(i)) = model.activations(data.row(i));
  Eigen::MatrixXd t = data.labels().cast<double>().array() * 2.0 - 1.0;
  const auto objective = [&](const Eigen::MatrixXd& w) {
    return (phi * w - t).squaredNorm() + config.ridge * w.squaredNorm();
  };
  const double best = objective(model.weights());
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    for (double eps : {1e-3, -1e-3}) {
      Eigen::MatrixXd w = model.weights();
      w(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(w.rows()))),
        static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(w.cols())))) += eps;
      CHECK(objective(w) >= best - 1e-8);
    }
  }
}

TEST_CASE("a label with one positive instance gets that instance as its prototype") {
  FeatureMatrix x(3, 2);
  x << 0, 0, 1, 1, 5, -2;
  LabelMatrix y(3, 2);
  y << 1, 0, 1, 0, 0, 1;
  const MultiLabelDataset data(x, y, {"a", "b"});
  const auto model = train_rbf(data, {});
  REQUIRE(model.units_per_label() == std::vector<std::size_t>{1, 1});
  CHECK(model.centers()(1, 0) == 5.0);
  CHECK(model.centers()(1, 1) == -2.0);
  // Label a: 1 prototype = mean of its two instances.
  CHECK(model.centers()(0, 0) == 0.5);
}

TEST_CASE("raw scores of hand-built models") {
  RbfModel::CenterMatrix centers(1, 2);
  centers << 1.0, 2.0;
  SUBCASE("zero weights give zero scores") {
    const RbfModel model(centers, 1.0, Eigen::MatrixXd::Zero(2, 3), {1, 0, 0});
    const std::vector<double> x{0.3, -7.0};
    CHECK(model.raw_scores(x).isZero());
    CHECK(native_prediction(model, x).empty());
  }
  SUBCASE("unit weight at its own center") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 1);
    w(0, 0) = 1.0;
    const RbfModel model(centers, 0.7, w, {1});
    const std::vector<double> x{1.0, 2.0};
    CHECK(model.raw_scores(x)(0) == 1.0);
  }
  SUBCASE("far from every center only the bias remains") {
    Eigen::MatrixXd w(2, 2);
    w << 5.0, 5.0, -0.25, 0.5;
    const RbfModel model(centers, 1.0, w, {1, 0});
    const std::vector<double> x{1e3, -1e3};
    const auto s = model.raw_scores(x);
    CHECK(s(0) == -0.25);
    CHECK(s(1) == 0.5);
    CHECK(native_prediction(model, x) == LabelSet::from_indices({1}));
  }
  SUBCASE("dimension mismatch") {
    const RbfModel model(centers, 1.0, Eigen::MatrixXd::Zero(2, 1), {1});
    const std::vector<double> x{1.0};
    CHECK_THROWS_AS(model.raw_scores(x), DataError);
  }
  SUBCASE("inconsistent model parts") {
    CHECK_THROWS_AS(RbfModel(centers, 0.0, Eigen::MatrixXd::Zero(2, 1), {1}), DataError);
    CHECK_THROWS_AS(RbfModel(centers, 1.0, Eigen::MatrixXd::Zero(3, 1), {1}), DataError);
    CHECK_THROWS_AS(RbfModel(centers, 1.0, Eigen::MatrixXd::Zero(2, 1), {2}), DataError);
  }
}

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(40.0) == doctest::Approx(1.0));
  CHECK(sigmoid(-800.0) == 0.0);
  CHECK(sigmoid(800.0) == 1.0);
  Rng rng(11);
  double prev = sigmoid(-30.0);
  for (int i = 1; i <= 600; ++i) {
    const double v = sigmoid(-30.0 + 0.1 * i);
    CHECK(v >= prev);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    prev = v;
  }
  for (int i = 0; i < 200; ++i) {
    const double x = rng.normal() * 10.0;
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("property: thresholding transformed scores at 0.5 matches raw scores at 0") {
  Rng rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    Eigen::VectorXd raw(6);
    for (Eigen::Index j = 0; j < raw.size(); ++j) {
      double v = rng.normal() * std::pow(10.0, rng.normal() * 3.0);
      if (std::abs(v) <= 1e-15) v = 1.0;
      raw(j) = v;
    }
    CHECK(threshold_labelset(raw, 0.0) == threshold_labelset(sigmoid_transform(raw), 0.5));
  }
}

TEST_CASE("training is deterministic and row-order independent for the prototypes") {
  const auto data = two_clouds(15, 8);
  RbfConfig config;
  config.fraction = 0.2;
  const auto a = train_rbf(data, config);
  const auto b = train_rbf(data, config);
  CHECK(a == b);

  // All 24 orders of a 4-instance problem give the same model up to rounding.
  FeatureMatrix x(4, 2);
  x << 0, 0, 1, 0.5, 3, 3, 2.5, 4;
  LabelMatrix y(4, 2);
  y << 1, 0, 1, 1, 0, 1, 0, 1;
  const MultiLabelDataset base(x, y, {"a", "b"});
  config.fraction = 0.5;
  const auto ref = train_rbf(base, config);
  std::vector<std::size_t> order{0, 1, 2, 3};
  const std::vector<double> probe{1.2, 1.7};
  do {
    const auto model = train_rbf(base.subset(order), config);
    CHECK(model.centers() == ref.centers());
    CHECK(model.width() == ref.width());
    // Weights of a nearly collinear design only agree up to its conditioning.
    CHECK((model.weights() - ref.weights()).cwiseAbs().maxCoeff() < 1e-8 * (1.0 + ref.weights().cwiseAbs().maxCoeff()));
    CHECK((model.raw_scores(probe) - ref.raw_scores(probe)).cwiseAbs().maxCoeff() < 1e-9);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST_CASE("k-means") {
  SUBCASE("never returns more centers than distinct points") {
    FeatureMatrix p(5, 1);
    p << 1, 1, 2, 2, 2;
    const auto c = kmeans(p, 4, 10, 1);
    CHECK(c.rows() == 2);
  }
  SUBCASE("separates well-spaced groups") {
    FeatureMatrix p(6, 1);
    p << 0, 0.1, 0.2, 10, 10.1, 10.2;
    auto c = kmeans(p, 2, 50, 4);
    REQUIRE(c.rows() == 2);
    std::vector<double> v{c(0, 0), c(1, 0)};
    std::sort(v.begin(), v.end());
    CHECK(v[0] == doctest::Approx(0.1));
    CHECK(v[1] == doctest::Approx(10.1));
  }
}

TEST_CASE("standardization is stored and applied") {
  const auto data = two_clouds(10, 2);
  RbfConfig config;
  config.standardize = true;
  config.fraction = 0.2;
  const auto model = train_rbf(data, config);
  REQUIRE(model.standardized());
  CHECK(model.shift()(0) == doctest::Approx(data.features().col(0).mean()));
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(native_prediction(model, data.row(i)) == data.labelset(i));
}

TEST_CASE("training errors") {
  SUBCASE("no positive instances anywhere") {
    FeatureMatrix x(2, 1);
    x << 0, 1;
    const MultiLabelDataset data(x, LabelMatrix::Zero(2, 2), {"a", "b"});
    CHECK_THROWS_AS(train_rbf(data, {}), DataError);
  }
  SUBCASE("a label without positives is reported") {
    FeatureMatrix x(2, 1);
    x << 0, 1;
    LabelMatrix y(2, 2);
    y << 1, 0, 1, 0;
    const auto model = train_rbf(MultiLabelDataset(x, y, {"a", "b"}), {});
    REQUIRE(model.warnings().size() == 1);
    CHECK(model.warnings()[0].find("'b'") != std::string::npos);
  }
  SUBCASE("singular system without ridge") {
    FeatureMatrix x(1, 1);
    x << 2;
    LabelMatrix y(1, 1);
    y << 1;
    RbfConfig config;
    config.ridge = 0.0;
    CHECK_THROWS_AS(train_rbf(MultiLabelDataset(x, y, {"a"}), config), NumericError);
  }
  SUBCASE("bad configuration") {
    RbfConfig config;
    config.fraction = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.scaling = -1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config = {};
    config.ridge = -1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
  }
}
