#include "sffkit/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "sffkit/audio.hpp"
#include "sffkit/error.hpp"
#include "sffkit/serialize.hpp"

namespace sffkit {

std::vector<double> ExperimentConfig::resolved_c_grid() const {
  return c_grid.empty() ? default_c_grid() : c_grid;
}

double FoldReport::accuracy() const {
  if (predictions.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& p : predictions) {
    if (p.actual == p.predicted) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

namespace {

FeatureMatrix extract_matrix(const SignalBuffer& signal, const ExperimentConfig& config) {
  switch (config.feature_kind) {
    case FeatureKind::mfcc:
      return mfcc_baseline(signal, config.features);
    case FeatureKind::sffcc:
      return sffcc(signal, config.sff, config.features);
    default:
      return mfcc_sff(signal, config.sff, config.features);
  }
}

// The exact configuration a run used: grid expanded, mel count pinned to the
// per-kind default when unset.
ExperimentConfig resolve(const ExperimentConfig& config) {
  ExperimentConfig r = config;
  r.c_grid = config.resolved_c_grid();
  r.features.n_mel_filters = config.features.resolved_mel_filters(config.feature_kind);
  return r;
}

}  // namespace

std::vector<FeatureRow> extract_features(const CorpusManifest& manifest,
                                         const ExperimentConfig& config, bool allow_partial,
                                         std::vector<std::string>* warnings_out) {
  const auto entries = filter_by_task(manifest, config.task);
  if (entries.empty()) {
    throw Error(errc::empty_input, "extract_features: no manifest entries match the task filter");
  }
  std::vector<FeatureRow> rows;
  rows.reserve(entries.size());
  int corpus_rate = 0;
  for (const auto& entry : entries) {
    try {
      const SignalBuffer signal = load_wav(manifest.resolve_audio_path(entry));
      if (corpus_rate == 0) {
        corpus_rate = signal.sample_rate_hz;
      } else if (signal.sample_rate_hz != corpus_rate) {
        throw Error(errc::mixed_sample_rates,
                    "extract_features: " + entry.audio_path + " has sample rate " +
                        std::to_string(signal.sample_rate_hz) + ", corpus uses " +
                        std::to_string(corpus_rate));
      }
      FeatureRow row;
      row.utterance_id = entry.utterance_id;
      row.speaker_id = entry.speaker_id;
      row.class_label = entry.class_label;
      row.task = entry.task;
      row.kind = config.feature_kind;
      row.values = mean_pool(extract_matrix(signal, config)).values;
      rows.push_back(std::move(row));
    } catch (const Error& err) {
      // A rate mismatch is a corpus-level inconsistency, not a bad file.
      if (!allow_partial || err.code() == errc::mixed_sample_rates) throw;
      if (warnings_out) {
        warnings_out->push_back("skipping " + entry.audio_path + ": " + err.what());
      }
    }
  }
  if (rows.empty()) {
    throw Error(errc::empty_input, "extract_features: every file failed to load");
  }
  return rows;
}

ExperimentReport run_loso(const std::vector<FeatureRow>& rows, const ExperimentConfig& config) {
  if (rows.empty()) throw Error(errc::empty_input, "run_loso: no feature rows");
  const std::size_t dim = rows.front().values.size();
  std::map<std::string, int> speaker_class;
  for (const auto& row : rows) {
    if (row.kind != rows.front().kind) {
      throw Error(errc::invalid_argument, "run_loso: mixed feature kinds in one experiment");
    }
    if (row.values.size() != dim) {
      throw Error(errc::length_mismatch, "run_loso: inconsistent feature dimensions");
    }
    const int cls = static_cast<int>(row.class_label);
    const auto [it, inserted] = speaker_class.emplace(row.speaker_id, cls);
    if (!inserted && it->second != cls) {
      throw Error(errc::manifest_conflicting_class,
                  "run_loso: speaker '" + row.speaker_id + "' appears with two classes");
    }
  }

  std::map<int, int> speakers_per_class;
  for (const auto& [speaker, cls] : speaker_class) speakers_per_class[cls] += 1;
  if (speakers_per_class.size() < 2) {
    throw Error(errc::invalid_argument, "run_loso: need at least two classes");
  }
  for (const auto& [cls, count] : speakers_per_class) {
    if (count < 2) {
      throw Error(errc::insufficient_speakers,
                  "run_loso: class '" + std::string(to_string(static_cast<ClassLabel>(cls))) +
                      "' has only " + std::to_string(count) +
                      " speaker(s); leave-one-speaker-out needs at least 2");
    }
  }

  ExperimentReport report;
  report.feature_kind = rows.front().kind;
  report.task = config.task;
  report.config_json = io::config_to_json(resolve(config));

  const std::vector<double> grid = config.resolved_c_grid();
  std::vector<double> fold_accuracies;
  std::vector<int> pooled_actual;
  std::vector<int> pooled_predicted;

  for (const auto& [held_speaker, held_class] : speaker_class) {
    Dataset train;
    std::vector<const FeatureRow*> held;
    for (const auto& row : rows) {
      if (row.speaker_id == held_speaker) {
        held.push_back(&row);
      } else {
        train.x.push_back(row.values);
        train.y.push_back(static_cast<int>(row.class_label));
        train.speaker_ids.push_back(row.speaker_id);
      }
    }
    // Fold isolation: nothing from the held-out speaker may reach training.
    for (const auto& s : train.speaker_ids) {
      if (s == held_speaker) throw std::logic_error("run_loso: fold isolation violated");
    }

    GridSearchResult search = grid_search_c(train, grid, config.svm_tol);
    for (const auto& w : search.warnings) {
      report.warnings.push_back("fold '" + held_speaker + "': " + w);
    }
    const OvoModel model = train_ovo(train, search.best_c, config.svm_tol);

    FoldReport fold;
    fold.held_out_speaker = held_speaker;
    fold.chosen_c = search.best_c;
    fold.grid_scores = search.scores;
    for (const FeatureRow* row : held) {
      PredictionRecord rec;
      rec.utterance_id = row->utterance_id;
      rec.actual = static_cast<int>(row->class_label);
      rec.predicted = model.predict(row->values);
      rec.decision_values = model.decision_values(row->values);
      pooled_actual.push_back(rec.actual);
      pooled_predicted.push_back(rec.predicted);
      fold.predictions.push_back(std::move(rec));
    }
    fold_accuracies.push_back(fold.accuracy());
    report.folds.push_back(std::move(fold));
  }

  report.n_folds = static_cast<int>(report.folds.size());
  report.aggregate = aggregate_folds(fold_accuracies, pooled_actual, pooled_predicted, kNumClasses);
  return report;
}

ExperimentReport run_loso(const CorpusManifest& manifest, const ExperimentConfig& config,
                          bool allow_partial) {
  std::vector<std::string> warnings;
  const auto rows = extract_features(manifest, config, allow_partial, &warnings);
  ExperimentReport report = run_loso(rows, config);
  report.warnings.insert(report.warnings.begin(), warnings.begin(), warnings.end());
  return report;
}

ComparisonReport compare_features(const CorpusManifest& manifest,
                                  const std::vector<FeatureKind>& kinds,
                                  const ExperimentConfig& config, bool allow_partial) {
  if (kinds.empty()) throw Error(errc::empty_input, "compare_features: no feature kinds");
  std::vector<ExperimentReport> reports;
  reports.reserve(kinds.size());
  for (const FeatureKind kind : kinds) {
    ExperimentConfig per_kind = config;
    per_kind.feature_kind = kind;
    reports.push_back(run_loso(manifest, per_kind, allow_partial));
  }
  return build_comparison(reports);
}

ComparisonReport build_comparison(const std::vector<ExperimentReport>& reports) {
  if (reports.empty()) throw Error(errc::empty_input, "build_comparison: no runs");
  ComparisonReport comparison;
  const double base_pct = reports.front().aggregate.fold_accuracy_mean * 100.0;
  for (const auto& report : reports) {
    ComparisonEntry entry;
    entry.kind = report.feature_kind;
    entry.report = report;
    entry.accuracy_pct = report.aggregate.fold_accuracy_mean * 100.0;
    entry.abs_improvement_pct = entry.accuracy_pct - base_pct;
    entry.rel_improvement_pct =
        base_pct > 0.0 ? 100.0 * (entry.accuracy_pct - base_pct) / base_pct : 0.0;
    comparison.entries.push_back(std::move(entry));
  }
  return comparison;
}

std::string format_percent_1dp(double percent) {
  // Round to two decimals first, then one, half away from zero both times.
  // Chained rounding is deliberate: a value like 5.7494 presents as 5.75 at
  // two decimals and the displayed single decimal follows that, giving 5.8.
  const double two = std::round(percent * 100.0) / 100.0;
  const double one = std::round(two * 10.0) / 10.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", one);
  return buf;
}

}  // namespace sffkit
