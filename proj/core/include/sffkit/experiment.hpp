#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sffkit/features.hpp"
#include "sffkit/manifest.hpp"
#include "sffkit/metrics.hpp"
#include "sffkit/sff.hpp"
#include "sffkit/svm.hpp"

namespace sffkit {

/// Everything a run needs, serializable to/from JSON so reports can embed the
/// exact configuration they were produced with.
struct ExperimentConfig {
  FeatureKind feature_kind = FeatureKind::sffcc;
  std::optional<Task> task;  // unset = all tasks
  SffConfig sff;
  FeatureConfig features;
  std::vector<double> c_grid;      // empty = default_c_grid()
  std::uint64_t seed = 0;          // reserved; the pipeline itself is deterministic
  std::filesystem::path output_dir;
  double svm_tol = 1e-4;

  std::vector<double> resolved_c_grid() const;
};

struct PredictionRecord {
  std::string utterance_id;
  int actual = 0;
  int predicted = 0;
  std::vector<double> decision_values;  // one per pairwise model, models order
};

struct FoldReport {
  std::string held_out_speaker;
  double chosen_c = 0.0;
  std::vector<std::pair<double, double>> grid_scores;  // (c, inner UAR)
  std::vector<PredictionRecord> predictions;

  double accuracy() const;
};

struct ExperimentReport {
  FeatureKind feature_kind = FeatureKind::sffcc;
  std::optional<Task> task;
  int n_folds = 0;
  FoldAggregate aggregate;
  std::vector<FoldReport> folds;
  std::vector<std::string> warnings;
  std::string config_json;  // resolved configuration the run used
};

/// Leave-one-speaker-out over precomputed per-utterance features: one fold
/// per distinct speaker (sorted id order); in each fold the standardizer,
/// grid search and final models are fitted on the remaining speakers only,
/// and the held-out speaker's utterances are predicted. Rows must all carry
/// the same feature kind and vector width.
///
/// Errors: errc::empty_input; errc::insufficient_speakers unless every class
/// present has >= 2 speakers and >= 2 classes exist; errc::length_mismatch /
/// errc::invalid_argument for inconsistent rows.
ExperimentReport run_loso(const std::vector<FeatureRow>& rows, const ExperimentConfig& config);

/// Full pipeline from a manifest: filter by task, load audio (all files must
/// share one sample rate), extract mean-pooled features, then run_loso. With
/// allow_partial, per-file failures are logged into the report's warnings and
/// the files skipped; otherwise the first failure aborts.
/// Additional errors: errc::mixed_sample_rates; audio loading errors.
ExperimentReport run_loso(const CorpusManifest& manifest, const ExperimentConfig& config,
                          bool allow_partial = false);

/// Extracts one mean-pooled feature row per manifest entry (after the task
/// filter). With allow_partial, failing files are skipped and their errors
/// returned through *warnings_out; otherwise the first failure aborts.
std::vector<FeatureRow> extract_features(const CorpusManifest& manifest,
                                         const ExperimentConfig& config,
                                         bool allow_partial = false,
                                         std::vector<std::string>* warnings_out = nullptr);

struct ComparisonEntry {
  FeatureKind kind = FeatureKind::mfcc;
  ExperimentReport report;
  double accuracy_pct = 0.0;           // mean fold accuracy, percent
  double abs_improvement_pct = 0.0;    // vs. first entry; 0 for the baseline
  double rel_improvement_pct = 0.0;    // 100*(acc - base)/base; 0 for the baseline
};

/// First kind is the baseline the others are measured against.
struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
};

ComparisonReport compare_features(const CorpusManifest& manifest,
                                  const std::vector<FeatureKind>& kinds,
                                  const ExperimentConfig& config, bool allow_partial = false);

/// Assembles a comparison from already-computed runs (entries follow kinds
/// order; first is the baseline).
ComparisonReport build_comparison(const std::vector<ExperimentReport>& reports);

/// Renders a percentage the way the comparison tables display it: the value
/// is rounded to two decimals first, then to one (both half away from zero),
/// so 5.749.. prints as "5.8" rather than "5.7".
std::string format_percent_1dp(double percent);

}  // namespace sffkit
