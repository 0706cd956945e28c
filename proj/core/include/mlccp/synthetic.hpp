#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

#include "mlccp/dataset.hpp"

namespace mlccp {

// Parameters of an i.i.d. multi-label generator: labels are drawn from a
// chained Bernoulli model (label 0 and the last label never co-occur), and
// features are the mean of the present labels' prototypes plus Gaussian noise.
struct SyntheticSpec {
  std::size_t n_train = 2000;
  std::size_t n_test = 2000;
  std::size_t n_labels = 4;
  std::size_t n_features = 8;
  double noise = 0.6;
  std::uint64_t seed = 7;
};

// Train and test sets drawn from the same distribution. Every instance has at
// least one label.
std::pair<MultiLabelDataset, MultiLabelDataset> make_synthetic(const SyntheticSpec& spec);

}  // namespace mlccp
