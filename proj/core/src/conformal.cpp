#include "mlccp/conformal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>

#include "mlccp/error.hpp"
#include "parallel.hpp"

namespace mlccp {

void MeasureParams::validate() const {
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("nonconformity exponent d must be positive");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("pair penalty lambda must be non-negative");
}

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<LabelSet::Bits> unseen_rows) : rows_(std::move(unseen_rows)) {
  if (rows_.size() > kMaxLabels) throw ConfigError("co-occurrence matrix supports at most 32 labels");
  for (std::size_t j = 0; j < rows_.size(); ++j) {
    if ((rows_[j] & ~full_mask(rows_.size())) != 0) throw DataError("co-occurrence row has bits beyond n labels");
    if (unseen(j, j)) throw DataError("co-occurrence matrix must have a zero diagonal");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (unseen(j, r) != unseen(r, j)) throw DataError("co-occurrence matrix must be symmetric");
    }
  }
}

CooccurrenceMatrix CooccurrenceMatrix::uniform(std::size_t n_labels, bool unseen) {
  std::vector<LabelSet::Bits> rows(n_labels, 0);
  if (unseen) {
    for (std::size_t j = 0; j < n_labels; ++j) rows[j] = full_mask(n_labels) & ~(LabelSet::Bits{1} << j);
  }
  return CooccurrenceMatrix(std::move(rows));
}

std::size_t CooccurrenceMatrix::unseen_pairs(LabelSet set) const {
  std::size_t count = 0;
  for (auto j : set.indices()) {
    const LabelSet::Bits above = ~((LabelSet::Bits{2} << j) - 1u);
    count += static_cast<std::size_t>(std::popcount(rows_[j] & set.bits() & above));
  }
  return count;
}

CooccurrenceMatrix cooccurrence(const LabelMatrix& labels) {
  if (labels.rows() == 0) throw DataError("co-occurrence needs at least one training row");
  const auto n = static_cast<std::size_t>(labels.cols());
  if (n > kMaxLabels) throw ConfigError("co-occurrence matrix supports at most 32 labels");
  std::vector<LabelSet::Bits> seen(n, 0);
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    LabelSet::Bits row = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (labels(i, static_cast<Eigen::Index>(j)) != 0) row |= LabelSet::Bits{1} << j;
    }
    for (LabelSet::Bits rest = row; rest != 0; rest &= rest - 1) seen[static_cast<std::size_t>(std::countr_zero(rest))] |= row;
  }
  std::vector<LabelSet::Bits> unseen(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    unseen[j] = full_mask(n) & ~seen[j] & ~(LabelSet::Bits{1} << j);
  }
  return CooccurrenceMatrix(std::move(unseen));
}

namespace {

// |t - o|^d for t in {0, 1}.
inline double label_term(double output, bool present, double d) {
  return std::pow(std::abs((present ? 1.0 : 0.0) - output), d);
}

void check_width(std::span<const double> transformed, const CooccurrenceMatrix& mu) {
  if (transformed.size() != mu.n_labels()) {
    throw DataError("got " + std::to_string(transformed.size()) + " outputs for " + std::to_string(mu.n_labels()) +
                    " labels");
  }
}

}  // namespace

double nonconformity(std::span<const double> transformed, LabelSet set, const CooccurrenceMatrix& mu,
                     const MeasureParams& params) {
  check_width(transformed, mu);
  if ((set.bits() & ~full_mask(mu.n_labels())) != 0) throw DataError("labelset has bits beyond n labels");
  double sum = 0.0;
  for (std::size_t j = 0; j < transformed.size(); ++j) sum += label_term(transformed[j], set.contains(j), params.d);
  return sum + params.lambda * static_cast<double>(mu.unseen_pairs(set));
}

void score_all_labelsets(std::span<const double> transformed, const CooccurrenceMatrix& mu,
                         const MeasureParams& params, std::vector<double>& out) {
  check_width(transformed, mu);
  const std::size_t n = transformed.size();
  if (n > kMaxEnumeratedLabels) {
    throw ConfigError("refusing to enumerate 2^" + std::to_string(n) + " labelsets (limit n <= " +
                      std::to_string(kMaxEnumeratedLabels) + ")");
  }
  const std::size_t total = std::size_t{1} << n;
  out.assign(total, 0.0);
  std::vector<std::uint8_t> pairs(total, 0);

  // Doubling pass: after label j, entry m holds the left-to-right sum over
  // labels 0..j for the labelset m, i.e. exactly the additions nonconformity()
  // performs.
  for (std::size_t j = 0; j < n; ++j) {
    const double present = label_term(transformed[j], true, params.d);
    const double absent = label_term(transformed[j], false, params.d);
    const std::size_t half = std::size_t{1} << j;
    const auto row = mu.row(j);
    for (std::size_t m = 0; m < half; ++m) {
      out[m | half] = out[m] + present;
      out[m] = out[m] + absent;
      pairs[m | half] = static_cast<std::uint8_t>(pairs[m] + std::popcount(row & static_cast<LabelSet::Bits>(m)));
    }
  }
  for (std::size_t m = 0; m < total; ++m) out[m] = out[m] + params.lambda * static_cast<double>(pairs[m]);
}

CcpModel::CcpModel(std::vector<RbfModel> fold_models, std::vector<std::vector<double>> fold_calibration,
                   std::vector<CooccurrenceMatrix> fold_mu, MeasureParams params,
                   std::vector<std::string> label_names)
    : fold_models_(std::move(fold_models)),
      fold_calibration_(std::move(fold_calibration)),
      fold_mu_(std::move(fold_mu)),
      params_(params),
      label_names_(std::move(label_names)) {
  params_.validate();
  if (fold_models_.size() < 2) throw DataError("cross-conformal model needs at least two folds");
  if (fold_calibration_.size() != fold_models_.size() || fold_mu_.size() != fold_models_.size()) {
    throw DataError("fold models, calibration lists and co-occurrence matrices must have one entry per fold");
  }
  if (label_names_.empty() || label_names_.size() > kMaxEnumeratedLabels) {
    throw DataError("cross-conformal model needs between 1 and 20 labels");
  }
  for (std::size_t k = 0; k < fold_models_.size(); ++k) {
    if (fold_models_[k].n_labels() != n_labels() || fold_mu_[k].n_labels() != n_labels()) {
      throw DataError("fold " + std::to_string(k) + " disagrees on the label count");
    }
    if (fold_models_[k].n_features() != fold_models_.front().n_features()) {
      throw DataError("fold " + std::to_string(k) + " disagrees on the feature count");
    }
    const auto& cal = fold_calibration_[k];
    if (cal.empty()) throw DataError("fold " + std::to_string(k) + " has no calibration scores");
    if (!std::is_sorted(cal.begin(), cal.end())) throw DataError("calibration scores must be sorted ascending");
    if (!(cal.front() >= 0.0) || !std::isfinite(cal.back())) {
      throw DataError("calibration scores must be finite and non-negative");
    }
    l_ += cal.size();
  }
}

CcpModel train_ccp(const MultiLabelDataset& train, const FoldPartition& folds, const RbfConfig& rbf_config,
                   const MeasureParams& params, std::size_t threads) {
  rbf_config.validate();
  params.validate();
  if (folds.size() != train.size()) {
    throw ConfigError("fold partition covers " + std::to_string(folds.size()) + " instances but the dataset has " +
                      std::to_string(train.size()));
  }
  if (train.n_labels() > kMaxEnumeratedLabels) {
    throw ConfigError("cross-conformal prediction supports at most 20 labels, got " +
                      std::to_string(train.n_labels()));
  }

  const std::size_t k = folds.k();
  std::vector<std::optional<RbfModel>> models(k);
  std::vector<std::vector<double>> calibration(k);
  std::vector<CooccurrenceMatrix> mus(k);

  detail::parallel_for(k, threads, [&](std::size_t fold) {
    const auto proper = train.subset(folds.complement(fold));
    const auto held_out = folds.members(fold);
    models[fold].emplace(train_rbf(proper, rbf_config));
    mus[fold] = cooccurrence(proper.labels());

    auto& scores = calibration[fold];
    scores.reserve(held_out.size());
    for (auto i : held_out) {
      const Eigen::VectorXd o = sigmoid_transform(models[fold]->raw_scores(train.row(i)));
      scores.push_back(nonconformity(std::span<const double>(o.data(), static_cast<std::size_t>(o.size())),
                                     train.labelset(i), mus[fold], params));
    }
    std::sort(scores.begin(), scores.end());
  });

  std::vector<RbfModel> fold_models;
  fold_models.reserve(k);
  for (auto& m : models) fold_models.push_back(std::move(*m));
  return CcpModel(std::move(fold_models), std::move(calibration), std::move(mus), params, train.label_names());
}

PValueTable::PValueTable(std::size_t n_labels, std::size_t l, std::vector<std::uint32_t> numerators)
    : n_labels_(n_labels), l_(l), numerators_(std::move(numerators)) {
  if (n_labels_ == 0 || n_labels_ > kMaxEnumeratedLabels) throw DataError("p-value table needs 1..20 labels");
  if (numerators_.size() != (std::size_t{1} << n_labels_) - 1) {
    throw DataError("p-value table must hold 2^n - 1 entries");
  }
  for (auto v : numerators_) {
    if (v == 0 || v > l_ + 1) throw DataError("p-value numerator out of range [1, l + 1]");
  }
}

std::vector<Eigen::VectorXd> fold_outputs(const CcpModel& ccp, std::span<const double> x) {
  if (x.size() != ccp.n_features()) {
    throw DataError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                    std::to_string(ccp.n_features()));
  }
  std::vector<Eigen::VectorXd> outputs;
  outputs.reserve(ccp.k());
  for (const auto& model : ccp.fold_models()) outputs.push_back(sigmoid_transform(model.raw_scores(x)));
  return outputs;
}

PValueTable p_values_from_outputs(const CcpModel& ccp, const std::vector<Eigen::VectorXd>& outputs) {
  if (outputs.size() != ccp.k()) throw DataError("expected one output vector per fold");
  const std::size_t total = std::size_t{1} << ccp.n_labels();
  std::vector<std::uint32_t> counts(total, 1);
  std::vector<double> scores;
  for (std::size_t k = 0; k < ccp.k(); ++k) {
    const auto& o = outputs[k];
    score_all_labelsets(std::span<const double>(o.data(), static_cast<std::size_t>(o.size())), ccp.fold_mu()[k],
                        ccp.params(), scores);
    const auto& cal = ccp.fold_calibration()[k];
    for (std::size_t m = 1; m < total; ++m) {
      // Calibration scores >= alpha, ties included.
      const auto first = std::lower_bound(cal.begin(), cal.end(), scores[m]);
      counts[m] += static_cast<std::uint32_t>(cal.end() - first);
    }
  }
  counts.erase(counts.begin());
  return PValueTable(ccp.n_labels(), ccp.l(), std::move(counts));
}

PValueTable p_values(const CcpModel& ccp, std::span<const double> x) {
  return p_values_from_outputs(ccp, fold_outputs(ccp, x));
}

}  // namespace mlccp
