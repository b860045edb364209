#include "sffkit/metrics.hpp"

#include <cmath>
#include <string>

#include "sffkit/error.hpp"

namespace sffkit {

std::int64_t ConfusionMatrix::total() const {
  std::int64_t acc = 0;
  for (const auto& row : counts) {
    for (const auto v : row) acc += v;
  }
  return acc;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  if (other.counts.size() != counts.size()) {
    throw Error(errc::length_mismatch, "ConfusionMatrix: size mismatch");
  }
  for (std::size_t r = 0; r < counts.size(); ++r) {
    if (other.counts[r].size() != counts[r].size()) {
      throw Error(errc::length_mismatch, "ConfusionMatrix: size mismatch");
    }
    for (std::size_t c = 0; c < counts[r].size(); ++c) counts[r][c] += other.counts[r][c];
  }
  return *this;
}

ConfusionMatrix make_confusion(const std::vector<int>& actual, const std::vector<int>& predicted,
                               int n_classes) {
  if (n_classes < 1) throw Error(errc::invalid_argument, "make_confusion: n_classes must be >= 1");
  if (actual.size() != predicted.size()) {
    throw Error(errc::length_mismatch, "make_confusion: actual/predicted size mismatch");
  }
  ConfusionMatrix cm;
  cm.counts.assign(static_cast<std::size_t>(n_classes),
                   std::vector<std::int64_t>(static_cast<std::size_t>(n_classes), 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (actual[i] < 0 || actual[i] >= n_classes || predicted[i] < 0 || predicted[i] >= n_classes) {
      throw Error(errc::invalid_argument,
                  "make_confusion: label outside [0, " + std::to_string(n_classes) + ")");
    }
    cm.counts[static_cast<std::size_t>(actual[i])][static_cast<std::size_t>(predicted[i])] += 1;
  }
  return cm;
}

MetricReport compute_metrics(const ConfusionMatrix& confusion) {
  const int n = confusion.n_classes();
  if (n == 0 || confusion.total() == 0) {
    throw Error(errc::empty_input, "compute_metrics: empty confusion matrix");
  }
  MetricReport report;
  report.confusion = confusion;
  report.precision.assign(static_cast<std::size_t>(n), 0.0);
  report.recall.assign(static_cast<std::size_t>(n), 0.0);
  report.f1.assign(static_cast<std::size_t>(n), 0.0);
  report.precision_defined.assign(static_cast<std::size_t>(n), false);
  report.recall_defined.assign(static_cast<std::size_t>(n), false);

  std::int64_t trace = 0;
  double recall_sum = 0.0;
  int recall_count = 0;
  for (int c = 0; c < n; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    std::int64_t row_sum = 0;
    std::int64_t col_sum = 0;
    for (int k = 0; k < n; ++k) {
      row_sum += confusion.counts[ci][static_cast<std::size_t>(k)];
      col_sum += confusion.counts[static_cast<std::size_t>(k)][ci];
    }
    const std::int64_t diag = confusion.counts[ci][ci];
    trace += diag;
    if (row_sum > 0) {
      report.recall[ci] = static_cast<double>(diag) / static_cast<double>(row_sum);
      report.recall_defined[ci] = true;
      recall_sum += report.recall[ci];
      ++recall_count;
    }
    if (col_sum > 0) {
      report.precision[ci] = static_cast<double>(diag) / static_cast<double>(col_sum);
      report.precision_defined[ci] = true;
    }
    const double pr = report.precision[ci] + report.recall[ci];
    if (pr > 0.0) report.f1[ci] = 2.0 * report.precision[ci] * report.recall[ci] / pr;
  }
  report.uar = recall_count > 0 ? recall_sum / recall_count : 0.0;
  report.accuracy = static_cast<double>(trace) / static_cast<double>(confusion.total());
  return report;
}

FoldAggregate aggregate_folds(const std::vector<double>& fold_accuracies,
                              const std::vector<int>& pooled_actual,
                              const std::vector<int>& pooled_predicted, int n_classes) {
  if (fold_accuracies.empty()) throw Error(errc::empty_input, "aggregate_folds: no folds");
  if (pooled_actual.size() != pooled_predicted.size()) {
    throw Error(errc::length_mismatch, "aggregate_folds: pooled size mismatch");
  }
  FoldAggregate agg;
  agg.fold_accuracies = fold_accuracies;
  double mean = 0.0;
  for (const double a : fold_accuracies) mean += a;
  mean /= static_cast<double>(fold_accuracies.size());
  double var = 0.0;
  for (const double a : fold_accuracies) var += (a - mean) * (a - mean);
  var /= static_cast<double>(fold_accuracies.size());  // population variance
  agg.fold_accuracy_mean = mean;
  agg.fold_accuracy_std = std::sqrt(var);
  agg.pooled = compute_metrics(make_confusion(pooled_actual, pooled_predicted, n_classes));
  return agg;
}

}  // namespace sffkit
