#include "sffkit/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "csv_line.hpp"
#include "sffkit/error.hpp"

namespace sffkit::io {

using nlohmann::json;

namespace {

std::string fmt_full(double v) {  // round-trip precision
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_fixed(double v, int decimals) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_failure, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(errc::io_failure, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::file_not_found, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(errc::invalid_argument, what + ": invalid JSON");
  return j;
}

// Fixed-width table: rows of cells, first row is the header.
std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    if (row.size() > width.size()) width.resize(row.size(), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += " | ";
      out += row[i];
      if (i + 1 < row.size()) out.append(width[i] - row[i].size(), ' ');
    }
    out += "\n";
  }
  return out;
}

std::vector<std::string> metric_table_header() {
  std::vector<std::string> h{"Feature", "Accuracy"};
  for (int c = 0; c < kNumClasses; ++c) {
    h.push_back("Precision-" + std::to_string(c));
    h.push_back("Recall-" + std::to_string(c));
    h.push_back("F1-" + std::to_string(c));
  }
  return h;
}

std::vector<std::string> metric_table_row(const ExperimentReport& report) {
  const auto& agg = report.aggregate;
  std::vector<std::string> row;
  row.push_back(to_string(report.feature_kind));
  row.push_back(format_percent_1dp(agg.fold_accuracy_mean * 100.0) + " ± " +
                format_percent_1dp(agg.fold_accuracy_std * 100.0));
  for (int c = 0; c < kNumClasses; ++c) {
    const auto ci = static_cast<std::size_t>(c);
    row.push_back(fmt_fixed(agg.pooled.precision[ci], 2));
    row.push_back(fmt_fixed(agg.pooled.recall[ci], 2));
    row.push_back(fmt_fixed(agg.pooled.f1[ci], 2));
  }
  return row;
}

json metrics_to_obj(const MetricReport& m) {
  json confusion = json::array();
  for (const auto& row : m.confusion.counts) confusion.push_back(row);
  return json{{"uar", m.uar},
              {"accuracy", m.accuracy},
              {"precision", m.precision},
              {"recall", m.recall},
              {"f1", m.f1},
              {"precision_defined", m.precision_defined},
              {"recall_defined", m.recall_defined},
              {"confusion", confusion}};
}

json config_to_obj(const ExperimentConfig& config) {
  json sff{{"r", config.sff.r}, {"delta_f_hz", config.sff.delta_f_hz}};
  sff["explicit_k"] = config.sff.explicit_k ? json(*config.sff.explicit_k) : json(nullptr);
  json features{{"n_cepstra", config.features.n_cepstra},
                {"hop_s", config.features.hop_s},
                {"window_s", config.features.window_s},
                {"delta_window", config.features.delta_window},
                {"log_floor", config.features.log_floor}};
  features["n_mel_filters"] =
      config.features.n_mel_filters ? json(*config.features.n_mel_filters) : json(nullptr);
  json j{{"feature_kind", to_string(config.feature_kind)},
         {"sff", sff},
         {"features", features},
         {"c_grid", config.c_grid},
         {"seed", config.seed},
         {"output_dir", config.output_dir.generic_string()},
         {"svm_tol", config.svm_tol}};
  j["task"] = config.task ? json(to_string(*config.task)) : json(nullptr);
  return j;
}

json report_to_obj(const ExperimentReport& report) {
  json folds = json::array();
  for (const auto& fold : report.folds) {
    json predictions = json::array();
    for (const auto& p : fold.predictions) {
      predictions.push_back(json{{"utterance_id", p.utterance_id},
                                 {"actual", p.actual},
                                 {"predicted", p.predicted},
                                 {"decision_values", p.decision_values}});
    }
    json scores = json::array();
    for (const auto& [c, s] : fold.grid_scores) scores.push_back(json::array({c, s}));
    folds.push_back(json{{"held_out_speaker", fold.held_out_speaker},
                         {"chosen_c", fold.chosen_c},
                         {"accuracy", fold.accuracy()},
                         {"grid_scores", scores},
                         {"predictions", predictions}});
  }
  json j{{"feature_kind", to_string(report.feature_kind)},
         {"n_folds", report.n_folds},
         {"accuracy",
          json{{"mean", report.aggregate.fold_accuracy_mean},
               {"std", report.aggregate.fold_accuracy_std},
               {"per_fold", report.aggregate.fold_accuracies}}},
         {"pooled", metrics_to_obj(report.aggregate.pooled)},
         {"folds", folds},
         {"warnings", report.warnings},
         {"protocol",
          json{{"cross_validation", "leave-one-speaker-out"},
               {"hyperparameter_selection",
                "nested leave-one-speaker-out over training speakers; score is the unweighted "
                "average recall of pooled inner predictions; ties take the smallest C"},
               {"utterance_pooling", "per-recording mean over frames"},
               {"accuracy_spread", "population standard deviation of per-fold accuracy"}}}};
  j["task"] = report.task ? json(to_string(*report.task)) : json(nullptr);
  j["config"] = report.config_json.empty() ? json(nullptr)
                                           : parse_json(report.config_json, "embedded config");
  return j;
}

json comparison_to_obj(const ComparisonReport& comparison) {
  json entries = json::array();
  for (const auto& e : comparison.entries) {
    entries.push_back(json{{"feature_kind", to_string(e.kind)},
                           {"accuracy_pct", e.accuracy_pct},
                           {"abs_improvement_pct", e.abs_improvement_pct},
                           {"rel_improvement_pct", e.rel_improvement_pct},
                           {"rel_improvement_display", format_percent_1dp(e.rel_improvement_pct)},
                           {"report", report_to_obj(e.report)}});
  }
  return json{{"baseline",
               comparison.entries.empty() ? json(nullptr)
                                          : json(to_string(comparison.entries.front().kind))},
              {"entries", entries}};
}

}  // namespace

void write_feature_csv(const std::vector<FeatureRow>& rows, const std::filesystem::path& path) {
  if (rows.empty()) throw Error(errc::empty_input, "write_feature_csv: no rows");
  const std::size_t dim = rows.front().values.size();
  std::string out = "utterance_id,speaker_id,class_label,task,feature_kind";
  for (std::size_t j = 0; j < dim; ++j) out += ",f" + std::to_string(j);
  out += "\n";
  for (const auto& row : rows) {
    if (row.values.size() != dim) {
      throw Error(errc::length_mismatch, "write_feature_csv: inconsistent vector widths");
    }
    out += detail::csv_field(row.utterance_id);
    out += ",";
    out += detail::csv_field(row.speaker_id);
    out += ",";
    out += to_string(row.class_label);
    out += ",";
    out += to_string(row.task);
    out += ",";
    out += to_string(row.kind);
    for (const double v : row.values) {
      out += ",";
      out += fmt_full(v);
    }
    out += "\n";
  }
  write_text_file(path, out);
}

std::vector<FeatureRow> read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::file_not_found, "read_feature_csv: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(errc::manifest_parse, "read_feature_csv: " + path.string() + ": empty file");
  }
  const auto header = detail::split_csv_line(detail::strip_cr(line), 1);
  const std::vector<std::string> fixed{"utterance_id", "speaker_id", "class_label", "task",
                                       "feature_kind"};
  if (header.size() <= fixed.size()) {
    throw Error(errc::manifest_parse, "read_feature_csv: header has no feature columns");
  }
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (header[i] != fixed[i]) {
      throw Error(errc::manifest_parse,
                  "read_feature_csv: header column " + std::to_string(i) + " must be '" +
                      fixed[i] + "'");
    }
  }
  const std::size_t dim = header.size() - fixed.size();
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[fixed.size() + j] != "f" + std::to_string(j)) {
      throw Error(errc::manifest_parse, "read_feature_csv: feature columns must be f0..f" +
                                            std::to_string(dim - 1));
    }
  }

  std::vector<FeatureRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(line);
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw Error(errc::manifest_parse, "read_feature_csv: line " + std::to_string(line_no) +
                                            ": expected " + std::to_string(header.size()) +
                                            " fields, got " + std::to_string(fields.size()));
    }
    FeatureRow row;
    row.utterance_id = fields[0];
    row.speaker_id = fields[1];
    try {
      row.class_label = class_label_from_string(fields[2]);
      row.task = task_from_string(fields[3]);
      row.kind = feature_kind_from_string(fields[4]);
    } catch (const Error& err) {
      throw Error(errc::manifest_parse,
                  "read_feature_csv: line " + std::to_string(line_no) + ": " + err.what());
    }
    row.values.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      try {
        row.values.push_back(std::stod(fields[fixed.size() + j]));
      } catch (const std::exception&) {
        throw Error(errc::manifest_parse, "read_feature_csv: line " + std::to_string(line_no) +
                                              ": bad number '" + fields[fixed.size() + j] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(errc::empty_input, "read_feature_csv: " + path.string() + " holds no rows");
  }
  return rows;
}

void write_spectrogram_csv(const Spectrogram& spec, const std::filesystem::path& csv_path) {
  if (spec.frames.empty()) throw Error(errc::empty_input, "write_spectrogram_csv: no frames");
  std::string out;
  for (const auto& frame : spec.frames) {
    for (std::size_t b = 0; b < frame.size(); ++b) {
      if (b > 0) out += ",";
      out += fmt_short(frame[b]);
    }
    out += "\n";
  }
  write_text_file(csv_path, out);

  json sidecar{{"bin_spacing_hz", spec.bin_spacing_hz},
               {"bin_start_hz", spec.bin_start_hz},
               {"hop_s", spec.hop_s},
               {"sample_rate_hz", spec.sample_rate_hz},
               {"origin", spec.origin == SpectrogramOrigin::sff ? "sff" : "stft"},
               {"n_frames", spec.frames.size()},
               {"n_bins", spec.frames.front().size()}};
  std::filesystem::path sidecar_path = csv_path;
  sidecar_path.replace_extension(".json");
  write_text_file(sidecar_path, sidecar.dump(2) + "\n");
}

void write_confusion_csv(const ConfusionMatrix& confusion, const std::filesystem::path& path) {
  const int n = confusion.n_classes();
  std::string out = "actual\\predicted";
  for (int c = 0; c < n; ++c) {
    out += ",";
    out += to_string(static_cast<ClassLabel>(c));
  }
  out += "\n";
  for (int r = 0; r < n; ++r) {
    out += to_string(static_cast<ClassLabel>(r));
    for (int c = 0; c < n; ++c) {
      out += ",";
      out += std::to_string(confusion.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    }
    out += "\n";
  }
  write_text_file(path, out);
}

std::string config_to_json(const ExperimentConfig& config) {
  return config_to_obj(config).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& json_text) {
  const json j = parse_json(json_text, "config");
  if (!j.is_object()) throw Error(errc::invalid_argument, "config: top level must be an object");
  ExperimentConfig config;
  try {
    if (j.contains("feature_kind")) {
      config.feature_kind = feature_kind_from_string(j.at("feature_kind").get<std::string>());
    }
    if (j.contains("task") && !j.at("task").is_null()) {
      const auto token = j.at("task").get<std::string>();
      if (token != "all") config.task = task_from_string(token);
    }
    if (j.contains("sff")) {
      const json& s = j.at("sff");
      config.sff.r = s.value("r", config.sff.r);
      config.sff.delta_f_hz = s.value("delta_f_hz", config.sff.delta_f_hz);
      if (s.contains("explicit_k") && !s.at("explicit_k").is_null()) {
        config.sff.explicit_k = s.at("explicit_k").get<int>();
      }
    }
    if (j.contains("features")) {
      const json& f = j.at("features");
      config.features.n_cepstra = f.value("n_cepstra", config.features.n_cepstra);
      if (f.contains("n_mel_filters") && !f.at("n_mel_filters").is_null()) {
        config.features.n_mel_filters = f.at("n_mel_filters").get<int>();
      }
      config.features.hop_s = f.value("hop_s", config.features.hop_s);
      config.features.window_s = f.value("window_s", config.features.window_s);
      config.features.delta_window = f.value("delta_window", config.features.delta_window);
      config.features.log_floor = f.value("log_floor", config.features.log_floor);
    }
    if (j.contains("c_grid")) config.c_grid = j.at("c_grid").get<std::vector<double>>();
    config.seed = j.value("seed", config.seed);
    if (j.contains("output_dir")) {
      config.output_dir = std::filesystem::path(j.at("output_dir").get<std::string>());
    }
    config.svm_tol = j.value("svm_tol", config.svm_tol);
  } catch (const json::exception& err) {
    throw Error(errc::invalid_argument, std::string("config: ") + err.what());
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_text_file(path));
}

std::string model_to_json(const OvoModel& model, const std::string& config_json) {
  json models = json::array();
  for (const auto& m : model.models) {
    models.push_back(json{{"pair", json::array({m.class_pair.first, m.class_pair.second})},
                          {"weights", m.weights},
                          {"bias", m.bias},
                          {"c", m.c_value}});
  }
  json j{{"kind", "linear-ovo-svm"},
         {"classes", model.classes},
         {"c", model.c_value},
         {"standardizer", json{{"mean", model.standardizer.mean},
                               {"stddev", model.standardizer.stddev}}},
         {"models", models}};
  j["config"] = config_json.empty() ? json(nullptr) : parse_json(config_json, "model config");
  return j.dump(2) + "\n";
}

OvoModel model_from_json(const std::string& json_text, std::string* config_json_out) {
  const json j = parse_json(json_text, "model");
  OvoModel model;
  try {
    if (j.value("kind", "") != "linear-ovo-svm") {
      throw Error(errc::invalid_argument, "model: unknown kind");
    }
    model.classes = j.at("classes").get<std::vector<int>>();
    model.c_value = j.at("c").get<double>();
    model.standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
    model.standardizer.stddev = j.at("standardizer").at("stddev").get<std::vector<double>>();
    for (const auto& m : j.at("models")) {
      BinarySvmModel b;
      b.class_pair = {m.at("pair")[0].get<int>(), m.at("pair")[1].get<int>()};
      b.weights = m.at("weights").get<std::vector<double>>();
      b.bias = m.at("bias").get<double>();
      b.c_value = m.at("c").get<double>();
      model.models.push_back(std::move(b));
    }
    if (config_json_out) {
      *config_json_out = j.contains("config") && !j.at("config").is_null()
                             ? j.at("config").dump(2) + "\n"
                             : std::string();
    }
  } catch (const json::exception& err) {
    throw Error(errc::invalid_argument, std::string("model: ") + err.what());
  }
  return model;
}

std::string report_to_json(const ExperimentReport& report) {
  return report_to_obj(report).dump(2) + "\n";
}

std::string render_report_text(const ExperimentReport& report) {
  const auto& agg = report.aggregate;
  std::string out;
  out += "Experiment: " + std::string(to_string(report.feature_kind)) + " features, task ";
  out += report.task ? to_string(*report.task) : "all";
  out += "\n";
  out += "Folds: " + std::to_string(report.n_folds) + " (leave-one-speaker-out)\n\n";
  out += "Accuracy: " + format_percent_1dp(agg.fold_accuracy_mean * 100.0) + " ± " +
         format_percent_1dp(agg.fold_accuracy_std * 100.0) +
         "  (per-fold mean ± population std, %)\n";
  out += "Pooled UAR: " + fmt_fixed(agg.pooled.uar, 3) + "\n\n";

  out += render_table({metric_table_header(), metric_table_row(report)});
  out += "\n";

  out += "Confusion (rows actual, columns predicted):\n";
  std::vector<std::vector<std::string>> cm_rows;
  std::vector<std::string> cm_header{""};
  for (int c = 0; c < kNumClasses; ++c) cm_header.push_back(to_string(static_cast<ClassLabel>(c)));
  cm_rows.push_back(cm_header);
  for (int r = 0; r < kNumClasses; ++r) {
    std::vector<std::string> row{to_string(static_cast<ClassLabel>(r))};
    for (int c = 0; c < kNumClasses; ++c) {
      row.push_back(std::to_string(
          agg.pooled.confusion.counts[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]));
    }
    cm_rows.push_back(row);
  }
  out += render_table(cm_rows);
  out += "\n";

  out += "Notes:\n";
  out += "  - C chosen per fold by nested leave-one-speaker-out on the training speakers only.\n";
  out += "  - Utterance features are mean-pooled per recording.\n";
  out += "  - Class-wise metrics come from predictions pooled over all folds.\n";
  if (!report.warnings.empty()) {
    out += "Warnings:\n";
    for (const auto& w : report.warnings) out += "  - " + w + "\n";
  }
  return out;
}

std::string comparison_to_json(const ComparisonReport& comparison) {
  return comparison_to_obj(comparison).dump(2) + "\n";
}

std::string render_comparison_text(const ComparisonReport& comparison) {
  if (comparison.entries.empty()) {
    throw Error(errc::empty_input, "render_comparison_text: no entries");
  }
  std::vector<std::vector<std::string>> rows;
  auto header = metric_table_header();
  header.push_back("Abs. improvement");
  header.push_back("Rel. improvement");
  rows.push_back(header);
  for (std::size_t i = 0; i < comparison.entries.size(); ++i) {
    const auto& e = comparison.entries[i];
    auto row = metric_table_row(e.report);
    if (i == 0) {
      row.push_back("-");
      row.push_back("-");
    } else {
      const std::string sign = e.abs_improvement_pct > 0.0 ? "+" : "";
      row.push_back(sign + format_percent_1dp(e.abs_improvement_pct));
      const std::string rsign = e.rel_improvement_pct > 0.0 ? "+" : "";
      row.push_back(rsign + format_percent_1dp(e.rel_improvement_pct) + "%");
    }
    rows.push_back(row);
  }
  std::string out = "Feature comparison (baseline: " +
                    std::string(to_string(comparison.entries.front().kind)) + ")\n\n";
  out += render_table(rows);
  out += "\nImprovements are absolute / relative accuracy deltas vs. the baseline row.\n";
  return out;
}

std::string render_comparison_csv(const ComparisonReport& comparison) {
  if (comparison.entries.empty()) {
    throw Error(errc::empty_input, "render_comparison_csv: no entries");
  }
  std::string out = "feature,accuracy_mean_pct,accuracy_std_pct";
  for (int c = 0; c < kNumClasses; ++c) {
    const std::string i = std::to_string(c);
    out += ",precision_" + i + ",recall_" + i + ",f1_" + i;
  }
  out += ",abs_improvement_pct,rel_improvement_pct\n";
  for (const auto& e : comparison.entries) {
    const auto& agg = e.report.aggregate;
    out += to_string(e.kind);
    out += "," + fmt_full(agg.fold_accuracy_mean * 100.0);
    out += "," + fmt_full(agg.fold_accuracy_std * 100.0);
    for (int c = 0; c < kNumClasses; ++c) {
      const auto ci = static_cast<std::size_t>(c);
      out += "," + fmt_full(agg.pooled.precision[ci]);
      out += "," + fmt_full(agg.pooled.recall[ci]);
      out += "," + fmt_full(agg.pooled.f1[ci]);
    }
    out += "," + fmt_full(e.abs_improvement_pct);
    out += "," + fmt_full(e.rel_improvement_pct);
    out += "\n";
  }
  return out;
}

void write_report_files(const ExperimentReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "report.json", report_to_json(report));
  write_text_file(out_dir / "report.txt", render_report_text(report));
  write_confusion_csv(report.aggregate.pooled.confusion, out_dir / "confusion.csv");

  std::string predictions = "speaker_id,utterance_id,actual,predicted,chosen_c";
  std::size_t n_decisions = 0;
  for (const auto& fold : report.folds) {
    if (!fold.predictions.empty()) {
      n_decisions = fold.predictions.front().decision_values.size();
      break;
    }
  }
  for (std::size_t d = 0; d < n_decisions; ++d) predictions += ",decision_" + std::to_string(d);
  predictions += "\n";
  for (const auto& fold : report.folds) {
    for (const auto& p : fold.predictions) {
      predictions += detail::csv_field(fold.held_out_speaker);
      predictions += ",";
      predictions += detail::csv_field(p.utterance_id);
      predictions += ",";
      predictions += to_string(static_cast<ClassLabel>(p.actual));
      predictions += ",";
      predictions += to_string(static_cast<ClassLabel>(p.predicted));
      predictions += ",";
      predictions += fmt_short(fold.chosen_c);
      for (const double d : p.decision_values) {
        predictions += ",";
        predictions += fmt_full(d);
      }
      predictions += "\n";
    }
  }
  write_text_file(out_dir / "predictions.csv", predictions);
}

}  // namespace sffkit::io
