#pragma once

#include <cstdint>
#include <vector>

namespace sffkit {

/// Row = actual class, column = predicted class, in fixed class order.
struct ConfusionMatrix {
  std::vector<std::vector<std::int64_t>> counts;

  int n_classes() const { return static_cast<int>(counts.size()); }
  std::int64_t total() const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

ConfusionMatrix make_confusion(const std::vector<int>& actual, const std::vector<int>& predicted,
                               int n_classes);

/// Per-class precision/recall/F1 and their unweighted means. A class with no
/// actual (or predicted) examples has recall (or precision) reported as 0 and
/// flagged undefined rather than dropped, keeping vector shapes stable.
struct MetricReport {
  double uar = 0.0;       // mean recall over classes with actual examples
  double accuracy = 0.0;  // pooled fraction correct
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  std::vector<bool> precision_defined;
  std::vector<bool> recall_defined;
  ConfusionMatrix confusion;
};

/// Errors: errc::empty_input for an all-zero matrix.
MetricReport compute_metrics(const ConfusionMatrix& confusion);

/// Cross-validation aggregate: per-fold accuracy mean +/- population std
/// (the "48.7 +/- 7" presentation), plus metrics over the pooled predictions
/// of all folds, which is where class-wise numbers come from (single-speaker
/// folds rarely contain every class).
struct FoldAggregate {
  double fold_accuracy_mean = 0.0;
  double fold_accuracy_std = 0.0;  // population std over folds
  std::vector<double> fold_accuracies;
  MetricReport pooled;
};

/// Errors: errc::empty_input with no folds; errc::length_mismatch when
/// pooled actual/predicted sizes differ; errc::invalid_argument for labels
/// outside [0, n_classes).
FoldAggregate aggregate_folds(const std::vector<double>& fold_accuracies,
                              const std::vector<int>& pooled_actual,
                              const std::vector<int>& pooled_predicted, int n_classes);

}  // namespace sffkit
