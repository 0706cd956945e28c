#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlccp/dataset.hpp"
#include "mlccp/label_set.hpp"

namespace mlccp {

struct RbfConfig {
  // Prototypes per label = ceil(fraction * positives of that label).
  double fraction = 0.01;
  // Kernel width = scaling * mean pairwise distance between prototypes.
  double scaling = 1.0;
  std::size_t kmeans_iters = 100;
  std::uint64_t seed = 1;
  double ridge = 1e-8;
  // z-score features with statistics of the training data the model sees.
  bool standardize = false;

  void validate() const;
};

// Multi-label RBF network: Gaussian units at per-label k-means prototypes
// feeding a linear output layer with one column per label.
class RbfModel {
 public:
  using CenterMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  RbfModel(CenterMatrix centers, double width, Eigen::MatrixXd weights, std::vector<std::size_t> units_per_label,
           Eigen::VectorXd shift = {}, Eigen::VectorXd scale = {});

  std::size_t n_units() const { return static_cast<std::size_t>(centers_.rows()); }
  std::size_t n_features() const { return n_features_; }
  std::size_t n_labels() const { return static_cast<std::size_t>(weights_.cols()); }

  const CenterMatrix& centers() const { return centers_; }
  double width() const { return width_; }
  // (n_units + 1) x n_labels; the last row is the bias.
  const Eigen::MatrixXd& weights() const { return weights_; }
  const std::vector<std::size_t>& units_per_label() const { return units_per_label_; }
  const Eigen::VectorXd& shift() const { return shift_; }
  const Eigen::VectorXd& scale() const { return scale_; }
  bool standardized() const { return shift_.size() != 0; }

  // Messages about labels that contributed no prototypes.
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string message) { warnings_.push_back(std::move(message)); }

  // Hidden-layer activations followed by a trailing 1 for the bias.
  Eigen::VectorXd activations(std::span<const double> x) const;

  // One real score per label; positive means "label present".
  Eigen::VectorXd raw_scores(std::span<const double> x) const;

  friend bool operator==(const RbfModel& a, const RbfModel& b);

 private:
  CenterMatrix centers_;
  double width_;
  Eigen::MatrixXd weights_;
  std::vector<std::size_t> units_per_label_;
  Eigen::VectorXd shift_;
  Eigen::VectorXd scale_;
  std::size_t n_features_;
  std::vector<std::string> warnings_;
};

RbfModel train_rbf(const MultiLabelDataset& train, const RbfConfig& config);

// Seeded k-means over `points` (rows). Returns at most k centers; fewer when
// the points have fewer distinct values. Result does not depend on row order.
RbfModel::CenterMatrix kmeans(const FeatureMatrix& points, std::size_t k, std::size_t max_iters, std::uint64_t seed);

// Number of prototypes for a label with `positives` instances.
std::size_t prototype_count(double fraction, std::size_t positives);

// Logistic sigmoid, elementwise.
Eigen::VectorXd sigmoid_transform(const Eigen::VectorXd& scores);
double sigmoid(double x);

// Labelset of all labels whose score exceeds `threshold` (0 for raw scores,
// 0.5 for transformed ones).
LabelSet threshold_labelset(const Eigen::VectorXd& scores, double threshold = 0.0);

// ML-RBF's own prediction: labels with raw score > 0. May be empty.
LabelSet native_prediction(const RbfModel& model, std::span<const double> x);

}  // namespace mlccp
