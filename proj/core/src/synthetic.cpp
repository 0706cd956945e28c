#include "mlccp/synthetic.hpp"

#include <cmath>
#include <string>

#include "mlccp/error.hpp"
#include "mlccp/random.hpp"

namespace mlccp {

std::pair<MultiLabelDataset, MultiLabelDataset> make_synthetic(const SyntheticSpec& spec) {
  if (spec.n_labels < 1 || spec.n_labels > kMaxLabels) throw ConfigError("synthetic label count must be 1..32");
  if (spec.n_features < 1) throw ConfigError("synthetic data needs at least one feature");

  Rng rng(spec.seed);
  const auto n = static_cast<Eigen::Index>(spec.n_labels);
  const auto d = static_cast<Eigen::Index>(spec.n_features);
  Eigen::MatrixXd prototypes(n, d);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index c = 0; c < d; ++c) prototypes(j, c) = 2.0 * rng.normal();
  }

  auto draw = [&](std::size_t rows) {
    FeatureMatrix x(static_cast<Eigen::Index>(rows), d);
    LabelMatrix y = LabelMatrix::Zero(static_cast<Eigen::Index>(rows), n);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      std::size_t present = 0;
      while (present == 0) {
        y.row(i).setZero();
        for (Eigen::Index j = 0; j < n; ++j) {
          const bool previous = j > 0 && y(i, j - 1) != 0;
          double p = previous ? 0.55 : 0.25;
          if (j == n - 1 && n > 2 && y(i, 0) != 0) p = 0.0;
          y(i, j) = rng.uniform01() < p ? 1 : 0;
        }
        present = static_cast<std::size_t>((y.row(i).array() != 0).count());
      }
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(d);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (y(i, j) != 0) mean += prototypes.row(j);
      }
      mean /= static_cast<double>(present);
      for (Eigen::Index c = 0; c < d; ++c) x(i, c) = mean(c) + spec.noise * rng.normal();
    }
    return std::pair{std::move(x), std::move(y)};
  };

  std::vector<std::string> names;
  for (std::size_t j = 0; j < spec.n_labels; ++j) names.push_back("L" + std::to_string(j));
  auto [xtr, ytr] = draw(spec.n_train);
  auto [xte, yte] = draw(spec.n_test);
  return {MultiLabelDataset(std::move(xtr), std::move(ytr), names),
          MultiLabelDataset(std::move(xte), std::move(yte), names)};
}

}  // namespace mlccp
