#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mlccp/dataset.hpp"
#include "mlccp/folds.hpp"
#include "mlccp/label_set.hpp"
#include "mlccp/mlrbf.hpp"

namespace mlccp {

// Largest label count for which the 2^n - 1 labelsets are enumerated.
inline constexpr std::size_t kMaxEnumeratedLabels = 20;

struct MeasureParams {
  // Exponent applied to |t_j - o_j|.
  double d = 4.0;
  // Penalty per pair of labels never seen together in training.
  double lambda = 1.0;

  void validate() const;
  friend bool operator==(const MeasureParams&, const MeasureParams&) = default;
};

// Symmetric indicator of label pairs that never co-occur. Row j is stored as a
// bitmask of the labels r with mu[j][r] = 1.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  explicit CooccurrenceMatrix(std::vector<LabelSet::Bits> unseen_rows);

  // Everything unseen (all_ones) or everything seen, for n labels.
  static CooccurrenceMatrix uniform(std::size_t n_labels, bool unseen);

  std::size_t n_labels() const { return rows_.size(); }
  bool unseen(std::size_t j, std::size_t r) const { return (rows_[j] >> r) & 1u; }
  LabelSet::Bits row(std::size_t j) const { return rows_[j]; }
  const std::vector<LabelSet::Bits>& rows() const { return rows_; }

  // #{(j, r) : j < r, both in `set`, mu[j][r] = 1}.
  std::size_t unseen_pairs(LabelSet set) const;

  friend bool operator==(const CooccurrenceMatrix&, const CooccurrenceMatrix&) = default;

 private:
  std::vector<LabelSet::Bits> rows_;
};

// mu over the rows of a binary label matrix. Requires at least one row.
CooccurrenceMatrix cooccurrence(const LabelMatrix& labels);

// Nonconformity of `set` given transformed outputs in [0, 1]:
//   sum_j |t_j - o_j|^d + lambda * unseen_pairs(set).
// The sum runs left to right over j; score_all_labelsets reproduces that order.
double nonconformity(std::span<const double> transformed, LabelSet set, const CooccurrenceMatrix& mu,
                     const MeasureParams& params);

// Scores of every labelset (including the empty one at index 0), indexed by
// bitmask. Bit-identical to calling nonconformity() per labelset, at a cost of
// about 3 * 2^n operations instead of n * 2^n.
void score_all_labelsets(std::span<const double> transformed, const CooccurrenceMatrix& mu,
                         const MeasureParams& params, std::vector<double>& out);

// Cross-conformal predictor: one RBF model per fold, trained on the other
// folds, with the sorted nonconformity scores of its held-out fold.
class CcpModel {
 public:
  CcpModel(std::vector<RbfModel> fold_models, std::vector<std::vector<double>> fold_calibration,
           std::vector<CooccurrenceMatrix> fold_mu, MeasureParams params, std::vector<std::string> label_names);

  std::size_t k() const { return fold_models_.size(); }
  std::size_t n_labels() const { return label_names_.size(); }
  std::size_t n_features() const { return fold_models_.front().n_features(); }
  // Total calibration scores, equal to the training-set size.
  std::size_t l() const { return l_; }

  const std::vector<RbfModel>& fold_models() const { return fold_models_; }
  const std::vector<std::vector<double>>& fold_calibration() const { return fold_calibration_; }
  const std::vector<CooccurrenceMatrix>& fold_mu() const { return fold_mu_; }
  const MeasureParams& params() const { return params_; }
  const std::vector<std::string>& label_names() const { return label_names_; }

  friend bool operator==(const CcpModel&, const CcpModel&) = default;

 private:
  std::vector<RbfModel> fold_models_;
  std::vector<std::vector<double>> fold_calibration_;
  std::vector<CooccurrenceMatrix> fold_mu_;
  MeasureParams params_;
  std::vector<std::string> label_names_;
  std::size_t l_ = 0;
};

// Trains fold k on every fold but k, scores fold k against it. `threads` > 1
// trains folds concurrently; the result does not depend on it.
CcpModel train_ccp(const MultiLabelDataset& train, const FoldPartition& folds, const RbfConfig& rbf_config,
                   const MeasureParams& params, std::size_t threads = 1);

// p-value of every non-empty labelset for one instance, stored as integer
// numerators over the common denominator l + 1.
class PValueTable {
 public:
  PValueTable(std::size_t n_labels, std::size_t l, std::vector<std::uint32_t> numerators);

  std::size_t n_labels() const { return n_labels_; }
  std::size_t l() const { return l_; }
  // Number of labelsets, 2^n - 1.
  std::size_t size() const { return numerators_.size(); }

  std::uint32_t numerator(LabelSet set) const { return numerators_[set.bits() - 1]; }
  std::uint32_t denominator() const { return static_cast<std::uint32_t>(l_ + 1); }
  double p(LabelSet set) const { return static_cast<double>(numerator(set)) / static_cast<double>(l_ + 1); }

  // Indexed by bitmask - 1.
  const std::vector<std::uint32_t>& numerators() const { return numerators_; }

  friend bool operator==(const PValueTable&, const PValueTable&) = default;

 private:
  std::size_t n_labels_;
  std::size_t l_;
  std::vector<std::uint32_t> numerators_;
};

// Transformed outputs of every fold model for one instance, fold-major.
std::vector<Eigen::VectorXd> fold_outputs(const CcpModel& ccp, std::span<const double> x);

// p(psi) = (sum_k #{alpha_i in fold k : alpha_i >= alpha^{psi,k}} + 1) / (l + 1).
PValueTable p_values(const CcpModel& ccp, std::span<const double> x);

// Same, starting from precomputed fold outputs.
PValueTable p_values_from_outputs(const CcpModel& ccp, const std::vector<Eigen::VectorXd>& outputs);

}  // namespace mlccp
