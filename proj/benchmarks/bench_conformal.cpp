#include <benchmark/benchmark.h>

#include "mlccp/conformal.hpp"
#include "mlccp/folds.hpp"
#include "mlccp/random.hpp"
#include "mlccp/synthetic.hpp"

namespace {

std::vector<double> outputs(std::size_t n, std::uint64_t seed) {
  mlccp::Rng rng(seed);
  std::vector<double> o(n);
  for (auto& v : o) v = rng.uniform01();
  return o;
}

void BM_ScoreAllFast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto o = outputs(n, 1);
  const auto mu = mlccp::CooccurrenceMatrix::uniform(n, true);
  std::vector<double> out;
  for (auto _ : state) {
    mlccp::score_all_labelsets(o, mu, {}, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(std::size_t{1} << n));
}
BENCHMARK(BM_ScoreAllFast)->Arg(6)->Arg(10)->Arg(14);

void BM_ScoreAllDirect(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto o = outputs(n, 1);
  const auto mu = mlccp::CooccurrenceMatrix::uniform(n, true);
  std::vector<double> out(std::size_t{1} << n);
  for (auto _ : state) {
    for (mlccp::LabelSet::Bits m = 0; m < out.size(); ++m) out[m] = mlccp::nonconformity(o, mlccp::LabelSet(m), mu, {});
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}
BENCHMARK(BM_ScoreAllDirect)->Arg(6)->Arg(10)->Arg(14);

void BM_PValues(benchmark::State& state) {
  mlccp::SyntheticSpec spec;
  spec.n_labels = static_cast<std::size_t>(state.range(0));
  spec.n_train = 1500;
  spec.n_test = 1;
  const auto [train, test] = mlccp::make_synthetic(spec);
  const auto ccp = mlccp::train_ccp(train, mlccp::make_folds(train.size(), 15, 1), {}, {}, 4);
  for (auto _ : state) {
    auto table = mlccp::p_values(ccp, test.row(0));
    benchmark::DoNotOptimize(table.numerators().data());
  }
}
BENCHMARK(BM_PValues)->Arg(6)->Arg(14)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
