#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mlccp/conformal.hpp"
#include "mlccp/label_set.hpp"

namespace mlccp {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + tn + fp + fn; }
  ConfusionCounts& operator+=(const ConfusionCounts& o);
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

// Value of F when 2tp + fp + fn = 0, i.e. the label is neither present nor
// predicted anywhere.
enum class EmptyFConvention { kOne, kZero };

std::vector<ConfusionCounts> confusion_counts(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                                              std::size_t n_labels);

// 2tp / (2tp + fp + fn).
double f_measure(const ConfusionCounts& c, EmptyFConvention convention = EmptyFConvention::kOne);

double hamming_loss(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred, std::size_t n_labels);
double classification_accuracy(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred);

struct FMeasures {
  double macro = 0.0;
  double micro = 0.0;
};
FMeasures f_measures(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred, std::size_t n_labels,
                     EmptyFConvention convention = EmptyFConvention::kOne);

struct SingleMetrics {
  double hamming_loss = 0.0;
  double accuracy = 0.0;
  double f_macro = 0.0;
  double f_micro = 0.0;
};
SingleMetrics evaluate_single(const std::vector<LabelSet>& truth, const std::vector<LabelSet>& pred,
                              std::size_t n_labels, EmptyFConvention convention = EmptyFConvention::kOne);

// Histogram bin of a prediction-set size: 0 = empty, 1 = {1}, 2 = {2},
// b >= 3 covers (2^(b-2), 2^(b-1)].
std::size_t set_size_bin(std::size_t size);
// Largest set size falling in bin b.
std::size_t bin_upper(std::size_t bin);
// "0", "1", "2", "3-4", "5-8", ...
std::string bin_label(std::size_t bin);

// Prediction-set sizes and empirical error at one significance level.
struct SetReport {
  double delta = 0.0;
  std::size_t n_labels = 0;
  std::size_t instances = 0;
  std::size_t errors = 0;
  // n_labels + 2 bins, see set_size_bin.
  std::vector<std::size_t> bin_counts;

  double error_rate() const;
  double bin_fraction(std::size_t bin) const;
  // Fraction of sets with at most `max_size` members; max_size must be a bin
  // upper edge (0, 1, 2 or a power of two).
  double fraction_at_most(std::size_t max_size) const;
};

// Empty sets count as errors.
SetReport set_report(const std::vector<PValueTable>& tables, const std::vector<LabelSet>& truth, double delta);

}  // namespace mlccp
