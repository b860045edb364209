#include <benchmark/benchmark.h>

#include <complex>
#include <random>
#include <vector>

#include "sffkit/transforms.hpp"

namespace {

std::vector<double> random_signal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

void BM_Fft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto real = random_signal(n, 7);
  std::vector<std::complex<double>> x(real.begin(), real.end());
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::fft(x, n));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fft)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

void BM_Dct2(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_signal(n, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::dct2(x));
  }
}
BENCHMARK(BM_Dct2)->Arg(40)->Arg(80)->Arg(256);

void BM_StftMagnitude(benchmark::State& state) {
  sffkit::SignalBuffer signal;
  signal.sample_rate_hz = 16000;
  signal.samples = random_signal(16000, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::stft_magnitude(signal, 0.030, 0.010));
  }
}
BENCHMARK(BM_StftMagnitude);

}  // namespace

BENCHMARK_MAIN();
