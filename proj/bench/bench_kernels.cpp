// Serial reference vs OpenMP versions of the hot kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "ambiact/centroid.hpp"
#include "ambiact/features.hpp"
#include "ambiact/nn.hpp"
#include "ambiact/simulator.hpp"

using namespace ambiact;

namespace {

const SampleSeries& series() {
  static const SampleSeries s = [] {
    sim::NoiseSpec noise{0.5, 0.0, 3};
    return sim::synth_motion(BasicActivity::Walk, 30LL * 60 * 1000, 50, noise);
  }();
  return s;
}

const std::vector<SampleWindow>& windows() {
  static const auto w = segment(series(), 128, 0.5);
  return w;
}

void BM_FeaturesSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(extract_features_serial(windows()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(windows().size()));
}

void BM_FeaturesParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(extract_features_parallel(windows()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(windows().size()));
}

nn::Conv1dLayer conv_layer() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-0.1, 0.1);
  nn::Conv1dLayer c{128, 32, 64, 1, std::vector<double>(128 * 32 * 64), std::vector<double>(128)};
  for (auto& v : c.weights) v = d(rng);
  for (auto& v : c.bias) v = d(rng);
  return c;
}

nn::Tensor conv_input() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> d(-1, 1);
  nn::Tensor t(32, 128);
  for (auto& v : t.data) v = d(rng);
  return t;
}

void BM_Conv1dSerial(benchmark::State& st) {
  const auto c = conv_layer();
  const auto x = conv_input();
  for (auto _ : st) benchmark::DoNotOptimize(nn::conv1d_forward(x, c));
}

void BM_Conv1dParallel(benchmark::State& st) {
  const auto c = conv_layer();
  const auto x = conv_input();
  for (auto _ : st) benchmark::DoNotOptimize(nn::conv1d_forward_parallel(x, c));
}

const nn::WeightsBundle& bundle() {
  static const auto b = nn::default_architecture({"walk", "jog", "sit", "stand", "lie", "stairUp", "stairDown"}, 3,
                                                 128, std::uint64_t{5});
  return b;
}

void BM_NetworkSerial(benchmark::State& st) {
  const std::span<const SampleWindow> w(windows().data(), 16);
  for (auto _ : st) benchmark::DoNotOptimize(nn::classify_windows_serial(w, bundle()));
}

void BM_NetworkParallel(benchmark::State& st) {
  const std::span<const SampleWindow> w(windows().data(), 16);
  for (auto _ : st) benchmark::DoNotOptimize(nn::classify_windows_parallel(w, bundle()));
}

const std::vector<FeatureVector>& rows() {
  static const auto r = extract_features_serial(windows());
  return r;
}

const CentroidModel& model() {
  static const CentroidModel m = [] {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rows().size(); ++i) labels.push_back("c" + std::to_string(i % 7));
    return fit_centroids(rows(), labels);
  }();
  return m;
}

void BM_CentroidSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(centroid_classify_serial(rows(), model()));
}

void BM_CentroidParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(centroid_classify_parallel(rows(), model()));
}

}  // namespace

BENCHMARK(BM_FeaturesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FeaturesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1dSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Conv1dParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NetworkSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NetworkParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CentroidSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CentroidParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
