#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace sffkit {

/// Training/evaluation samples with per-sample speaker attribution (the
/// cross-validation unit) and integer class labels.
struct Dataset {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  std::vector<std::string> speaker_ids;

  std::size_t size() const { return x.size(); }
  std::size_t dim() const { return x.empty() ? 0 : x.front().size(); }
};

/// Per-coordinate z-scoring fitted on training data only. A coordinate that
/// is constant in training keeps stddev 0 and standardizes to 0 for any
/// input; it carries no information, so it is neutralized rather than scaled.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Standardizer fit(const std::vector<std::vector<double>>& x);
  std::vector<double> apply(const std::vector<double>& v) const;
  std::vector<std::vector<double>> apply_all(const std::vector<std::vector<double>>& x) const;
};

/// Linear soft-margin binary SVM, decision(x) = w.x + b. Positive decisions
/// side with the +1 training label.
struct BinarySvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c_value = 0.0;
  std::pair<int, int> class_pair{0, 0};  // (+1 class, -1 class) when used one-vs-one

  double decision(const std::vector<double>& x) const;
};

struct SvmTrainInfo {
  std::vector<double> alpha;
  double kkt_violation = 0.0;   // max-violating-pair gap at termination
  double dual_objective = 0.0;  // sum(alpha) - 0.5 * alpha'Q alpha
  int iterations = 0;
};

/// Solves the soft-margin dual by pairwise coordinate ascent on the
/// maximally KKT-violating pair, stopping when the violation is <= tol.
/// Labels must be +1/-1 and both classes present (errc::invalid_argument).
/// Raises SolverNotConverged, carrying the best violation, at the iteration
/// cap. The bias comes from free support vectors when any exist, otherwise
/// from the midpoint of the violation bounds.
BinarySvmModel train_binary_svm(const std::vector<std::vector<double>>& x,
                                const std::vector<int>& y, double c, double tol = 1e-4,
                                SvmTrainInfo* info = nullptr);

/// One-vs-one multiclass model: one standardizer fitted on the whole
/// training set, one binary model per unordered class pair.
struct OvoModel {
  std::vector<int> classes;  // ascending
  Standardizer standardizer;
  std::vector<BinarySvmModel> models;
  double c_value = 0.0;

  /// Majority vote over pairwise decisions. Ties go to the tied class with
  /// the largest sum of |decision| over models that voted for it; a
  /// remaining tie picks the lowest class index.
  int predict(const std::vector<double>& x) const;

  /// Pairwise decision values for one input, in models order.
  std::vector<double> decision_values(const std::vector<double>& x) const;
};

/// Errors: errc::empty_input; errc::invalid_argument when fewer than two
/// classes are present.
OvoModel train_ovo(const Dataset& train, double c, double tol = 1e-4);

std::vector<double> default_c_grid();  // {1e-4, 1e-3, ..., 1e4}

struct GridSearchResult {
  double best_c = 0.0;
  std::vector<std::pair<double, double>> scores;  // (c, inner UAR), grid order
  std::vector<std::string> warnings;              // skipped degenerate folds
};

/// Picks C by leave-one-speaker-out over the training speakers: for each C,
/// every speaker is held out once, predictions are pooled, and the pooled
/// unweighted average recall is the score. Ties pick the smallest C. Inner
/// folds whose training half loses a class entirely are skipped with a
/// recorded warning. Errors: errc::insufficient_speakers with < 2 speakers.
GridSearchResult grid_search_c(const Dataset& train, const std::vector<double>& c_grid,
                               double tol = 1e-4);

}  // namespace sffkit
