#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sffkit/error.hpp"
#include "sffkit/metrics.hpp"

namespace {

sffkit::ConfusionMatrix matrix_of(std::vector<std::vector<std::int64_t>> counts) {
  sffkit::ConfusionMatrix cm;
  cm.counts = std::move(counts);
  return cm;
}

}  // namespace

TEST_SUITE_BEGIN("metrics");

TEST_CASE("make_confusion tallies by actual row and predicted column") {
  SUBCASE("perfect predictions land on the diagonal") {
    std::vector<int> actual, predicted;
    for (int c = 0; c < 3; ++c) {
      for (int i = 0; i < 10; ++i) {
        actual.push_back(c);
        predicted.push_back(c);
      }
    }
    const auto cm = sffkit::make_confusion(actual, predicted, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        CHECK(cm.counts[r][c] == (r == c ? 10 : 0));
      }
    }
    CHECK(cm.total() == 30);
  }

  SUBCASE("everything predicted as class zero fills the first column") {
    const std::vector<int> actual{0, 1, 2, 1, 2};
    const std::vector<int> predicted{0, 0, 0, 0, 0};
    const auto cm = sffkit::make_confusion(actual, predicted, 3);
    CHECK(cm.counts[0][0] == 1);
    CHECK(cm.counts[1][0] == 2);
    CHECK(cm.counts[2][0] == 2);
    for (int r = 0; r < 3; ++r) {
      CHECK(cm.counts[r][1] == 0);
      CHECK(cm.counts[r][2] == 0);
    }
  }

  SUBCASE("random labels match a direct tally") {
    std::mt19937 rng(211);
    std::uniform_int_distribution<int> pick(0, 2);
    std::vector<int> actual(200), predicted(200);
    std::int64_t tally[3][3] = {};
    for (int i = 0; i < 200; ++i) {
      actual[i] = pick(rng);
      predicted[i] = pick(rng);
      ++tally[actual[i]][predicted[i]];
    }
    const auto cm = sffkit::make_confusion(actual, predicted, 3);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) CHECK(cm.counts[r][c] == tally[r][c]);
    }
  }

  SUBCASE("length mismatch and out-of-range labels are rejected") {
    try {
      (void)sffkit::make_confusion({0, 1}, {0}, 3);
      FAIL("expected length_mismatch");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::length_mismatch);
    }
    try {
      (void)sffkit::make_confusion({0, 3}, {0, 1}, 3);
      FAIL("expected invalid_argument");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::invalid_argument);
    }
    try {
      (void)sffkit::make_confusion({0, -1}, {0, 1}, 3);
      FAIL("expected invalid_argument");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::invalid_argument);
    }
  }
}

TEST_CASE("compute_metrics on a perfect diagonal") {
  const auto report = sffkit::compute_metrics(matrix_of({{10, 0, 0}, {0, 10, 0}, {0, 0, 10}}));
  CHECK(report.accuracy == doctest::Approx(1.0));
  CHECK(report.uar == doctest::Approx(1.0));
  for (int c = 0; c < 3; ++c) {
    CHECK(report.precision[c] == doctest::Approx(1.0));
    CHECK(report.recall[c] == doctest::Approx(1.0));
    CHECK(report.f1[c] == doctest::Approx(1.0));
    CHECK(report.precision_defined[c]);
    CHECK(report.recall_defined[c]);
  }
}

TEST_CASE("compute_metrics worked example") {
  const auto report = sffkit::compute_metrics(matrix_of({{8, 2, 0}, {3, 5, 2}, {0, 4, 6}}));
  CHECK(std::abs(report.recall[0] - 0.8) <= 1e-9);
  CHECK(std::abs(report.recall[1] - 0.5) <= 1e-9);
  CHECK(std::abs(report.recall[2] - 0.6) <= 1e-9);
  CHECK(std::abs(report.uar - 19.0 / 30.0) <= 1e-9);
  CHECK(std::abs(report.uar - 0.6333333333333333) <= 1e-9);
  CHECK(std::abs(report.precision[0] - 8.0 / 11.0) <= 1e-9);
  CHECK(std::abs(report.accuracy - 19.0 / 30.0) <= 1e-9);
  const double p0 = 8.0 / 11.0, r0 = 0.8;
  CHECK(std::abs(report.f1[0] - 2.0 * p0 * r0 / (p0 + r0)) <= 1e-9);
}

TEST_CASE("a never-predicted class gets precision 0 and an undefined flag") {
  // nobody is ever predicted as class 2
  const auto report = sffkit::compute_metrics(matrix_of({{5, 0, 0}, {0, 5, 0}, {2, 3, 0}}));
  CHECK(report.precision[2] == 0.0);
  CHECK(!report.precision_defined[2]);
  CHECK(report.recall[2] == 0.0);
  CHECK(report.recall_defined[2]);  // class 2 had actual examples
  CHECK(report.f1[2] == 0.0);
  // uar still averages over all classes with actual examples
  CHECK(std::abs(report.uar - (1.0 + 1.0 + 0.0) / 3.0) <= 1e-9);
}

TEST_CASE("a class with no actual examples is dropped from uar") {
  const auto report = sffkit::compute_metrics(matrix_of({{5, 0, 0}, {1, 4, 0}, {0, 0, 0}}));
  CHECK(!report.recall_defined[2]);
  CHECK(report.recall[2] == 0.0);
  CHECK(std::abs(report.uar - (1.0 + 0.8) / 2.0) <= 1e-9);
}

TEST_CASE("an all-zero matrix is an error") {
  try {
    (void)sffkit::compute_metrics(matrix_of({{0, 0}, {0, 0}}));
    FAIL("expected empty_input");
  } catch (const sffkit::Error& e) {
    CHECK(e.code() == sffkit::errc::empty_input);
  }
}

TEST_CASE("uar is invariant to per-class support scaling") {
  const auto base = sffkit::compute_metrics(matrix_of({{8, 2, 0}, {3, 5, 2}, {0, 4, 6}}));
  const auto scaled =
      sffkit::compute_metrics(matrix_of({{80, 20, 0}, {3, 5, 2}, {0, 12, 18}}));
  CHECK(std::abs(base.uar - scaled.uar) <= 1e-12);
  // plain accuracy is not invariant, which is the point of using uar
  CHECK(std::abs(base.accuracy - scaled.accuracy) > 1e-3);
}

TEST_CASE("uar equals the mean of the defined recalls") {
  std::mt19937 rng(223);
  std::uniform_int_distribution<std::int64_t> count(0, 12);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<std::int64_t>> counts(3, std::vector<std::int64_t>(3));
    for (auto& row : counts) {
      for (auto& v : row) v = count(rng);
    }
    std::int64_t total = 0;
    for (const auto& row : counts) {
      for (const auto v : row) total += v;
    }
    if (total == 0) counts[0][0] = 1;
    const auto report = sffkit::compute_metrics(matrix_of(counts));
    double sum = 0.0;
    int defined = 0;
    for (int c = 0; c < 3; ++c) {
      if (report.recall_defined[c]) {
        sum += report.recall[c];
        ++defined;
      }
    }
    REQUIRE(defined > 0);
    CHECK(std::abs(report.uar - sum / defined) <= 1e-12);
  }
}

TEST_CASE("confusion matrices add cell-wise") {
  auto a = matrix_of({{1, 2}, {3, 4}});
  const auto b = matrix_of({{10, 0}, {0, 10}});
  a += b;
  CHECK(a.counts[0][0] == 11);
  CHECK(a.counts[0][1] == 2);
  CHECK(a.counts[1][0] == 3);
  CHECK(a.counts[1][1] == 14);
}

TEST_CASE("aggregate_folds summarizes accuracy and pools predictions") {
  const std::vector<int> actual{0, 0, 1, 1, 2, 2};
  const std::vector<int> predicted{0, 1, 1, 1, 2, 0};
  const auto agg = sffkit::aggregate_folds({0.4, 0.6}, actual, predicted, 3);
  CHECK(std::abs(agg.fold_accuracy_mean - 0.5) <= 1e-12);
  CHECK(std::abs(agg.fold_accuracy_std - 0.1) <= 1e-12);
  CHECK(agg.fold_accuracies == std::vector<double>{0.4, 0.6});
  CHECK(std::abs(agg.pooled.accuracy - 4.0 / 6.0) <= 1e-12);
  CHECK(agg.pooled.confusion.counts[2][0] == 1);

  SUBCASE("a single fold has zero spread") {
    const auto one = sffkit::aggregate_folds({0.7}, {0, 1}, {0, 1}, 3);
    CHECK(one.fold_accuracy_std == 0.0);
    CHECK(one.fold_accuracy_mean == doctest::Approx(0.7));
  }

  SUBCASE("pooled confusion equals the sum of per-fold confusions") {
    const std::vector<int> a1{0, 1}, p1{0, 0};
    const std::vector<int> a2{2, 1}, p2{2, 1};
    auto cm = sffkit::make_confusion(a1, p1, 3);
    cm += sffkit::make_confusion(a2, p2, 3);
    std::vector<int> all_a = a1, all_p = p1;
    all_a.insert(all_a.end(), a2.begin(), a2.end());
    all_p.insert(all_p.end(), p2.begin(), p2.end());
    const auto agg2 = sffkit::aggregate_folds({0.5, 1.0}, all_a, all_p, 3);
    CHECK(agg2.pooled.confusion.counts == cm.counts);
  }

  SUBCASE("error paths") {
    try {
      (void)sffkit::aggregate_folds({}, {}, {}, 3);
      FAIL("expected empty_input");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::empty_input);
    }
    try {
      (void)sffkit::aggregate_folds({0.5}, {0, 1}, {0}, 3);
      FAIL("expected length_mismatch");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::length_mismatch);
    }
    try {
      (void)sffkit::aggregate_folds({0.5}, {0, 5}, {0, 1}, 3);
      FAIL("expected invalid_argument");
    } catch (const sffkit::Error& e) {
      CHECK(e.code() == sffkit::errc::invalid_argument);
    }
  }
}

TEST_SUITE_END();
