#include "mlccp/metrics.hpp"

#include <bit>

#include "mlccp/error.hpp"
#include "mlccp/prediction.hpp"

namespace mlccp {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
  tp += o.tp;
  tn += o.tn;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

namespace {

void check_lengths(std::size_t truth, std::size_t pred) {
  if (truth != pred) {
    throw ConfigError("truth has " + std::to_string(truth) + " entries but predictions have " + std::to_string(pred));
  }
  if (truth == 0) throw ConfigError("metrics need at least one instance");
}

}  // namespace

std::vector<ConfusionCounts> confusion_counts(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                                              std::size_t n_labels) {
  check_lengths(truth.size(), pred.size());
  std::vector<ConfusionCounts> counts(n_labels);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = 0; j < n_labels; ++j) {
      const bool t = truth[i].contains(j);
      const bool p = pred[i].contains(j);
      auto& c = counts[j];
      if (t && p) ++c.tp;
      else if (!t && !p) ++c.tn;
      else if (p) ++c.fp;
      else ++c.fn;
    }
  }
  return counts;
}

double f_measure(const ConfusionCounts& c, EmptyFConvention convention) {
  const std::size_t denom = 2 * c.tp + c.fp + c.fn;
  if (denom == 0) return convention == EmptyFConvention::kOne ? 1.0 : 0.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(denom);
}

double hamming_loss(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred, std::size_t n_labels) {
  check_lengths(truth.size(), pred.size());
  if (n_labels == 0) throw ConfigError("hamming loss needs n_labels >= 1");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) wrong += symmetric_difference_size(truth[i], pred[i]);
  return static_cast<double>(wrong) / (static_cast<double>(n_labels) * static_cast<double>(truth.size()));
}

double classification_accuracy(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred) {
  check_lengths(truth.size(), pred.size());
  std::size_t exact = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) exact += truth[i] == pred[i] ? 1 : 0;
  return static_cast<double>(exact) / static_cast<double>(truth.size());
}

FMeasures f_measures(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred, std::size_t n_labels,
                     EmptyFConvention convention) {
  if (n_labels == 0) throw ConfigError("F-measures need n_labels >= 1");
  const auto counts = confusion_counts(truth, pred, n_labels);
  FMeasures out;
  ConfusionCounts pooled;
  double sum = 0.0;
  for (const auto& c : counts) {
    sum += f_measure(c, convention);
    pooled += c;
  }
  out.macro = sum / static_cast<double>(n_labels);
  out.micro = f_measure(pooled, convention);
  return out;
}

SingleMetrics evaluate_single(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                              std::size_t n_labels, EmptyFConvention convention) {
  const auto f = f_measures(truth, pred, n_labels, convention);
  return {hamming_loss(truth, pred, n_labels), classification_accuracy(truth, pred), f.macro, f.micro};
}

std::size_t set_size_bin(std::size_t size) {
  if (size <= 2) return size;
  // ceil(log2(size)) + 1
  return static_cast<std::size_t>(std::bit_width(size - 1)) + 1;
}

std::size_t bin_upper(std::size_t bin) {
  if (bin <= 2) return bin;
  return std::size_t{1} << (bin - 1);
}

std::string bin_label(std::size_t bin) {
  if (bin <= 2) return std::to_string(bin);
  return std::to_string(bin_upper(bin - 1) + 1) + "-" + std::to_string(bin_upper(bin));
}

double SetReport::error_rate() const {
  return instances == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(instances);
}

double SetReport::bin_fraction(std::size_t bin) const {
  return instances == 0 ? 0.0 : static_cast<double>(bin_counts.at(bin)) / static_cast<double>(instances);
}

double SetReport::fraction_at_most(std::size_t max_size) const {
  if (max_size > 2 && !std::has_single_bit(max_size)) {
    throw ConfigError("fraction_at_most needs 0, 1, 2 or a power of two");
  }
  std::size_t count = 0;
  for (std::size_t b = 0; b < bin_counts.size() && bin_upper(b) <= max_size; ++b) count += bin_counts[b];
  return instances == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(instances);
}

SetReport set_report(const std::vector<PValueTable>& tables, const std::vector<LabelSet>& truth, double delta) {
  if (tables.size() != truth.size()) {
    throw ConfigError("got " + std::to_string(tables.size()) + " p-value tables for " + std::to_string(truth.size()) +
                      " instances");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("significance level delta must lie in (0, 1)");
  SetReport report;
  report.delta = delta;
  report.n_labels = tables.empty() ? 0 : tables.front().n_labels();
  report.instances = tables.size();
  report.bin_counts.assign(report.n_labels + 2, 0);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (tables[i].n_labels() != report.n_labels) throw DataError("p-value tables disagree on the label count");
    const auto set = prediction_set(tables[i], delta);
    ++report.bin_counts[set_size_bin(set.size())];
    if (truth[i].empty() || !set.contains(truth[i])) ++report.errors;
  }
  return report;
}

}  // namespace mlccp
