// Serial reference vs OpenMP kernels on the UCI training split.

#include <benchmark/benchmark.h>

#include <random>

#include "digitsvm/features.hpp"
#include "digitsvm/kernel.hpp"
#include "digitsvm/multiclass.hpp"
#include "digitsvm/optdigits_io.hpp"
#include "digitsvm/serial.hpp"

using namespace digitsvm;

namespace {

const Dataset& train_data() {
  static const Dataset d = load_block_dataset(DIGITSVM_DATA_DIR "/optdigits.tra", 16.0);
  return d;
}

Dataset head(std::size_t n) {
  Dataset d = train_data();
  d.samples.resize(std::min(n, d.samples.size()));
  return d;
}

std::vector<RawBitmap> random_bitmaps(std::size_t n) {
  std::mt19937_64 rng(3);
  std::bernoulli_distribution on(0.3);
  std::vector<RawBitmap> out(n);
  for (auto& b : out) {
    for (int r = 4; r < 28; ++r) {
      for (int c = 6; c < 26; ++c) b.set(r, c, on(rng));
    }
  }
  return out;
}

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const auto xs = head(state.range(0)).features();
  for (auto _ : state) {
    auto g = Parallel ? gram_matrix(xs, KernelSpec{}) : serial::gram_matrix(xs, KernelSpec{});
    benchmark::DoNotOptimize(g);
  }
}

template <bool Parallel>
void BM_OvrTrain(benchmark::State& state) {
  const Dataset d = head(state.range(0));
  for (auto _ : state) {
    auto m = Parallel ? ovr_train(d, KernelSpec{}, TrainParams{}) : serial::ovr_train(d, KernelSpec{}, TrainParams{});
    benchmark::DoNotOptimize(m);
  }
}

template <bool Parallel>
void BM_Predict(benchmark::State& state) {
  const OvrModel m = ovr_train(head(1000), KernelSpec{}, TrainParams{});
  const auto xs = train_data().features();
  for (auto _ : state) {
    auto p = Parallel ? predict_batch(m, xs) : serial::predict_batch(m, xs);
    benchmark::DoNotOptimize(p);
  }
}

template <bool Parallel>
void BM_Moments(benchmark::State& state) {
  const auto bitmaps = random_bitmaps(state.range(0));
  for (auto _ : state) {
    auto f = Parallel ? moment_features_batch(bitmaps, true) : serial::moment_features_batch(bitmaps, true);
    benchmark::DoNotOptimize(f);
  }
}

}  // namespace

BENCHMARK(BM_Gram<false>)->Name("gram/serial")->Arg(1000)->Arg(3823)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gram<true>)->Name("gram/openmp")->Arg(1000)->Arg(3823)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OvrTrain<false>)->Name("ovr_train/serial")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OvrTrain<true>)->Name("ovr_train/openmp")->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Predict<false>)->Name("predict_batch/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Predict<true>)->Name("predict_batch/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments<false>)->Name("moments/serial")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Moments<true>)->Name("moments/openmp")->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
