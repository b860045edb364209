#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sffkit/experiment.hpp"
#include "sffkit/features.hpp"
#include "sffkit/metrics.hpp"
#include "sffkit/svm.hpp"
#include "sffkit/transforms.hpp"

namespace sffkit::io {

// All writers are deterministic: the same inputs produce byte-identical
// files. Doubles are printed with round-trip precision.

/// Feature CSV, header: utterance_id,speaker_id,class_label,task,feature_kind,f0..f{d-1}.
/// Rows must share one vector width (errc::length_mismatch).
void write_feature_csv(const std::vector<FeatureRow>& rows, const std::filesystem::path& path);
std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path);

/// Spectrogram as a plain CSV matrix (one row per frame) plus a JSON sidecar
/// (same path with a .json extension) carrying bin_spacing_hz, bin_start_hz,
/// hop_s, sample_rate_hz and origin.
void write_spectrogram_csv(const Spectrogram& spec, const std::filesystem::path& csv_path);

/// Confusion matrix CSV: header row of predicted-class names, one row per
/// actual class, first column the actual-class name.
void write_confusion_csv(const ConfusionMatrix& confusion, const std::filesystem::path& path);

std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json_text);  // missing fields keep defaults
ExperimentConfig load_config(const std::filesystem::path& path);

/// Trained multiclass model with its standardizer and the configuration
/// fingerprint of the run that produced it.
std::string model_to_json(const OvoModel& model, const std::string& config_json);
OvoModel model_from_json(const std::string& json_text, std::string* config_json_out = nullptr);

std::string report_to_json(const ExperimentReport& report);

/// Human-readable report: accuracy mean +/- std, a class-metric table with
/// the columns Accuracy, Precision-0..2, Recall-0..2, F1-0..2, the pooled
/// confusion matrix, and the protocol notes (nested hyperparameter search,
/// per-recording pooling).
std::string render_report_text(const ExperimentReport& report);

std::string comparison_to_json(const ComparisonReport& comparison);
std::string render_comparison_text(const ComparisonReport& comparison);
std::string render_comparison_csv(const ComparisonReport& comparison);

/// Writes report.json, report.txt, confusion.csv and predictions.csv into
/// out_dir (created if missing).
void write_report_files(const ExperimentReport& report, const std::filesystem::path& out_dir);

}  // namespace sffkit::io
