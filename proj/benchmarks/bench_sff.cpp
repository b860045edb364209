#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sffkit/sff.hpp"

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

// Full per-sample envelope and phase for every channel.
void BM_SffAnalyze(benchmark::State& state) {
  const auto signal = one_second(3);
  const sffkit::SffConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::sff_analyze(signal, config));
  }
}
BENCHMARK(BM_SffAnalyze)->Unit(benchmark::kMillisecond);

// Envelope subsampled at the frame hop; this is what feature extraction uses.
void BM_SffEnvelopeFrames(benchmark::State& state) {
  const auto signal = one_second(5);
  const sffkit::SffConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::sff_envelope_frames(signal, config, 0.010));
  }
}
BENCHMARK(BM_SffEnvelopeFrames)->Unit(benchmark::kMillisecond);

}  // namespace
