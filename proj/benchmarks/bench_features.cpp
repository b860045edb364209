#include <benchmark/benchmark.h>

#include <random>

#include "sffkit/features.hpp"

namespace {

sffkit::SignalBuffer one_second(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  sffkit::SignalBuffer signal;
  signal.sample_rate_hz = 16000;
  signal.samples.resize(16000);
  for (auto& v : signal.samples) v = dist(rng);
  return signal;
}

void BM_Sffcc(benchmark::State& state) {
  const auto signal = one_second(17);
  const sffkit::SffConfig sff;
  const sffkit::FeatureConfig features;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::sffcc(signal, sff, features));
  }
}
BENCHMARK(BM_Sffcc)->Unit(benchmark::kMillisecond);

void BM_MfccSff(benchmark::State& state) {
  const auto signal = one_second(19);
  const sffkit::SffConfig sff;
  const sffkit::FeatureConfig features;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::mfcc_sff(signal, sff, features));
  }
}
BENCHMARK(BM_MfccSff)->Unit(benchmark::kMillisecond);

void BM_MfccBaseline(benchmark::State& state) {
  const auto signal = one_second(23);
  const sffkit::FeatureConfig features;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::mfcc_baseline(signal, features));
  }
}
BENCHMARK(BM_MfccBaseline)->Unit(benchmark::kMillisecond);

}  // namespace
