#include "mlccp/mlrbf.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlccp/error.hpp"
#include "mlccp/random.hpp"

namespace mlccp {

void RbfConfig::validate() const {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("RBF fraction must lie in (0, 1]");
  if (!(scaling > 0.0) || !std::isfinite(scaling)) throw ConfigError("RBF scaling must be positive");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ConfigError("RBF ridge must be non-negative");
  if (kmeans_iters == 0) throw ConfigError("k-means iteration cap must be positive");
}

RbfModel::RbfModel(CenterMatrix centers, double width, Eigen::MatrixXd weights,
                   std::vector<std::size_t> units_per_label, Eigen::VectorXd shift, Eigen::VectorXd scale)
    : centers_(std::move(centers)),
      width_(width),
      weights_(std::move(weights)),
      units_per_label_(std::move(units_per_label)),
      shift_(std::move(shift)),
      scale_(std::move(scale)),
      n_features_(static_cast<std::size_t>(centers_.cols())) {
  if (centers_.rows() == 0) throw DataError("RBF model needs at least one unit");
  if (!(width_ > 0.0) || !std::isfinite(width_)) throw DataError("RBF width must be positive");
  if (weights_.rows() != centers_.rows() + 1) throw DataError("RBF weights must have n_units + 1 rows");
  if (weights_.cols() == 0) throw DataError("RBF model needs at least one label");
  if (units_per_label_.size() != static_cast<std::size_t>(weights_.cols())) {
    throw DataError("RBF units_per_label must have one entry per label");
  }
  if (std::accumulate(units_per_label_.begin(), units_per_label_.end(), std::size_t{0}) != n_units()) {
    throw DataError("RBF units_per_label does not sum to the unit count");
  }
  if (shift_.size() != scale_.size() || (shift_.size() != 0 && static_cast<std::size_t>(shift_.size()) != n_features_)) {
    throw DataError("RBF standardization vectors must match the feature count");
  }
}

Eigen::VectorXd RbfModel::activations(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw DataError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                    std::to_string(n_features_));
  }
  Eigen::Map<const Eigen::RowVectorXd> raw(x.data(), static_cast<Eigen::Index>(x.size()));
  Eigen::RowVectorXd point = raw;
  if (standardized()) point = (raw - shift_.transpose()).cwiseProduct(scale_.transpose());

  const double inv_two_sigma_sq = 1.0 / (2.0 * width_ * width_);
  Eigen::VectorXd act(centers_.rows() + 1);
  for (Eigen::Index m = 0; m < centers_.rows(); ++m) {
    act(m) = std::exp(-(point - centers_.row(m)).squaredNorm() * inv_two_sigma_sq);
  }
  act(centers_.rows()) = 1.0;
  return act;
}

Eigen::VectorXd RbfModel::raw_scores(std::span<const double> x) const {
  Eigen::VectorXd scores = weights_.transpose() * activations(x);
  if (!scores.allFinite()) throw NumericError("RBF produced a non-finite score");
  return scores;
}

bool operator==(const RbfModel& a, const RbfModel& b) {
  return a.centers_.rows() == b.centers_.rows() && a.centers_.cols() == b.centers_.cols() &&
         a.centers_ == b.centers_ && a.width_ == b.width_ && a.weights_.rows() == b.weights_.rows() &&
         a.weights_.cols() == b.weights_.cols() && a.weights_ == b.weights_ &&
         a.units_per_label_ == b.units_per_label_ && a.shift_.size() == b.shift_.size() && a.shift_ == b.shift_ &&
         a.scale_ == b.scale_;
}

std::size_t prototype_count(double fraction, std::size_t positives) {
  if (positives == 0) return 0;
  // 0.01 * 300 evaluates to 3.0000000000000004; a relative slack keeps ceil from
  // rounding such products up.
  const double product = fraction * static_cast<double>(positives);
  const auto k = static_cast<std::size_t>(std::ceil(product * (1.0 - 1e-12)));
  return std::clamp<std::size_t>(k, 1, positives);
}

namespace {

bool row_less(const FeatureMatrix& m, Eigen::Index a, Eigen::Index b) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
  }
  return false;
}

std::uint64_t label_seed(std::uint64_t seed, std::size_t label) {
  // splitmix64 finalizer over (seed, label)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(label) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

RbfModel::CenterMatrix kmeans(const FeatureMatrix& input, std::size_t k, std::size_t max_iters, std::uint64_t seed) {
  if (input.rows() == 0 || k == 0) return RbfModel::CenterMatrix(0, input.cols());

  // Canonical order so the outcome depends on point values only.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(input.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return row_less(input, a, b); });
  FeatureMatrix points(input.rows(), input.cols());
  for (std::size_t r = 0; r < order.size(); ++r) points.row(static_cast<Eigen::Index>(r)) = input.row(order[r]);

  std::vector<Eigen::Index> distinct;
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    if (distinct.empty() || row_less(points, distinct.back(), r)) distinct.push_back(r);
  }
  k = std::min(k, distinct.size());

  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform_index(distinct.size() - i));
    std::swap(distinct[i], distinct[j]);
  }
  std::sort(distinct.begin(), distinct.begin() + static_cast<std::ptrdiff_t>(k));

  const auto n = static_cast<std::size_t>(points.rows());
  RbfModel::CenterMatrix centers(static_cast<Eigen::Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c) centers.row(static_cast<Eigen::Index>(c)) = points.row(distinct[c]);

  std::vector<std::size_t> assignment(n, k);
  std::vector<double> dist(n, 0.0);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(0)).squaredNorm();
      for (std::size_t c = 1; c < k; ++c) {
        const double d = (points.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(c))).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      dist[i] = best_d;
      if (assignment[i] != best) {
        assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<std::size_t> counts(k, 0);
    centers.setZero();
    for (std::size_t i = 0; i < n; ++i) {
      centers.row(static_cast<Eigen::Index>(assignment[i])) += points.row(static_cast<Eigen::Index>(i));
      ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centers.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
        continue;
      }
      // Empty cluster: move it onto the point farthest from its center.
      const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
      centers.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(far));
      dist[far] = 0.0;
    }
  }
  return centers;
}

RbfModel train_rbf(const MultiLabelDataset& train, const RbfConfig& config) {
  config.validate();
  if (train.size() == 0) throw ConfigError("cannot train an RBF network on an empty dataset");

  const auto n_labels = train.n_labels();
  const auto d = static_cast<Eigen::Index>(train.n_features());

  FeatureMatrix x = train.features();
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;
  if (config.standardize) {
    shift = x.colwise().mean().transpose();
    scale.resize(d);
    for (Eigen::Index c = 0; c < d; ++c) {
      const double var = (x.col(c).array() - shift(c)).square().mean();
      scale(c) = var > 0.0 ? 1.0 / std::sqrt(var) : 1.0;
    }
    x = (x.rowwise() - shift.transpose()).array().rowwise() * scale.transpose().array();
  }

  std::vector<std::string> warnings;
  std::vector<RbfModel::CenterMatrix> per_label;
  std::vector<std::size_t> units_per_label(n_labels, 0);
  for (std::size_t j = 0; j < n_labels; ++j) {
    std::vector<Eigen::Index> pos;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (train.labels()(i, static_cast<Eigen::Index>(j)) != 0) pos.push_back(i);
    }
    if (pos.empty()) {
      warnings.push_back("label '" + train.label_names()[j] + "' has no positive training instances");
      continue;
    }
    FeatureMatrix points(static_cast<Eigen::Index>(pos.size()), d);
    for (std::size_t r = 0; r < pos.size(); ++r) points.row(static_cast<Eigen::Index>(r)) = x.row(pos[r]);
    auto centers = kmeans(points, prototype_count(config.fraction, pos.size()), config.kmeans_iters,
                          label_seed(config.seed, j));
    units_per_label[j] = static_cast<std::size_t>(centers.rows());
    per_label.push_back(std::move(centers));
  }

  const auto m = std::accumulate(units_per_label.begin(), units_per_label.end(), std::size_t{0});
  if (m == 0) throw DataError("no label has positive training instances; RBF network has no units");

  RbfModel::CenterMatrix centers(static_cast<Eigen::Index>(m), d);
  Eigen::Index at = 0;
  for (const auto& block : per_label) {
    centers.middleRows(at, block.rows()) = block;
    at += block.rows();
  }

  double width = config.scaling;
  if (m > 1) {
    double total = 0.0;
    for (Eigen::Index a = 0; a < centers.rows(); ++a) {
      for (Eigen::Index b = a + 1; b < centers.rows(); ++b) total += (centers.row(a) - centers.row(b)).norm();
    }
    const double mean = total / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
    if (mean > 0.0) width = config.scaling * mean;
  }

  // Design matrix on the (possibly standardized) training points.
  const auto units = static_cast<Eigen::Index>(m);
  const auto n = static_cast<Eigen::Index>(train.size());
  const auto l = static_cast<Eigen::Index>(n_labels);
  const Eigen::Index rows = config.ridge > 0.0 ? n + units + 1 : n;
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(rows, units + 1);
  Eigen::MatrixXd targets = Eigen::MatrixXd::Zero(rows, l);
  const double inv_two_sigma_sq = 1.0 / (2.0 * width * width);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index u = 0; u < units; ++u) {
      design(i, u) = std::exp(-(x.row(i) - centers.row(u)).squaredNorm() * inv_two_sigma_sq);
    }
    design(i, units) = 1.0;
    for (Eigen::Index j = 0; j < l; ++j) targets(i, j) = train.labels()(i, j) != 0 ? 1.0 : -1.0;
  }
  if (config.ridge > 0.0) {
    design.bottomRows(units + 1).diagonal().setConstant(std::sqrt(config.ridge));
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < units + 1) {
    throw NumericError("least-squares system for the RBF output layer is rank deficient (rank " +
                       std::to_string(qr.rank()) + " of " + std::to_string(units + 1) + "); use ridge > 0");
  }
  Eigen::MatrixXd weights = qr.solve(targets);
  if (!weights.allFinite()) throw NumericError("RBF output weights are not finite");

  RbfModel model(std::move(centers), width, std::move(weights), std::move(units_per_label), std::move(shift),
                 std::move(scale));
  for (auto& w : warnings) model.add_warning(std::move(w));
  return model;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Eigen::VectorXd sigmoid_transform(const Eigen::VectorXd& scores) {
  return scores.unaryExpr([](double v) { return sigmoid(v); });
}

LabelSet threshold_labelset(const Eigen::VectorXd& scores, double threshold) {
  if (static_cast<std::size_t>(scores.size()) > kMaxLabels) throw ConfigError("labelsets need at most 32 labels");
  LabelSet::Bits bits = 0;
  for (Eigen::Index j = 0; j < scores.size(); ++j) {
    if (scores(j) > threshold) bits |= LabelSet::Bits{1} << j;
  }
  return LabelSet(bits);
}

LabelSet native_prediction(const RbfModel& model, std::span<const double> x) {
  return threshold_labelset(model.raw_scores(x), 0.0);
}

}  // namespace mlccp
