#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "sffkit/svm.hpp"

namespace {

// Two gaussian blobs, linearly separable with some overlap.
void make_problem(std::size_t n, std::size_t dim, std::vector<std::vector<double>>& x,
                  std::vector<int>& y) {
  std::mt19937 rng(29);
  std::normal_distribution<double> noise(0.0, 1.0);
  x.assign(n, std::vector<double>(dim));
  y.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (i % 2 == 0) ? 1 : -1;
    for (std::size_t d = 0; d < dim; ++d) {
      x[i][d] = noise(rng) + (d == 0 ? 1.5 * y[i] : 0.0);
    }
  }
}

void BM_TrainBinarySvm(benchmark::State& state) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  make_problem(static_cast<std::size_t>(state.range(0)), 39, x, y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sffkit::train_binary_svm(x, y, 1.0));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_TrainBinarySvm)->RangeMultiplier(2)->Range(32, 256)->Complexity();

}  // namespace
