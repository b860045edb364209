// Command-line front end: extract features, evaluate them under LOSO,
// compare feature kinds, and export spectrogram matrices.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sffkit/audio.hpp"
#include "sffkit/error.hpp"
#include "sffkit/experiment.hpp"
#include "sffkit/manifest.hpp"
#include "sffkit/serialize.hpp"
#include "sffkit/sff.hpp"
#include "sffkit/transforms.hpp"

namespace {

using namespace sffkit;

// Accepts either a comma list ("0.01,0.1,1") or a decade range
// ("1e-4..1e4", endpoints must be powers of ten, stepped by 10x).
std::vector<double> parse_c_grid(const std::string& text) {
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    const double lo = std::stod(text.substr(0, range_pos));
    const double hi = std::stod(text.substr(range_pos + 2));
    if (!(lo > 0.0) || !(hi > 0.0) || lo > hi) {
      throw Error(errc::invalid_argument, "grid range must satisfy 0 < lo <= hi");
    }
    const auto exponent_of = [](double v) {
      const double e = std::log10(v);
      const long long rounded = std::llround(e);
      if (std::abs(e - static_cast<double>(rounded)) > 1e-9) {
        throw Error(errc::invalid_argument,
                    "grid range endpoints must be powers of ten, e.g. 1e-4..1e4");
      }
      return rounded;
    };
    std::vector<double> grid;
    for (long long e = exponent_of(lo); e <= exponent_of(hi); ++e) {
      grid.push_back(std::pow(10.0, static_cast<double>(e)));
    }
    return grid;
  }
  std::vector<double> grid;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      grid.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw Error(errc::invalid_argument, "bad grid value '" + token + "'");
    }
    if (!(grid.back() > 0.0)) {
      throw Error(errc::invalid_argument, "grid values must be positive");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (grid.empty()) throw Error(errc::invalid_argument, "empty C grid");
  return grid;
}

ExperimentConfig config_or_default(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : io::load_config(path);
}

void apply_task(ExperimentConfig& config, const std::string& token) {
  if (token == "all") {
    config.task.reset();
  } else {
    config.task = task_from_string(token);
  }
}

// The configuration as the run will actually use it, defaults pinned.
ExperimentConfig resolved(ExperimentConfig config) {
  config.c_grid = config.resolved_c_grid();
  config.features.n_mel_filters = config.features.resolved_mel_filters(config.feature_kind);
  return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_failure, "cannot open " + path.string() + " for writing");
  out << content;
}

int cmd_extract(const std::string& manifest_path, const std::string& features,
                const std::string& task, const std::string& config_path,
                const std::string& out_dir, bool allow_partial) {
  ExperimentConfig config = config_or_default(config_path);
  config.feature_kind = feature_kind_from_string(features);
  apply_task(config, task);

  const CorpusManifest manifest = load_manifest(manifest_path);
  std::vector<std::string> warnings;
  const auto rows = extract_features(manifest, config, allow_partial, &warnings);
  print_warnings(warnings);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  io::write_feature_csv(rows, dir / "features.csv");
  write_text(dir / "features.json", io::config_to_json(resolved(config)));
  std::cout << "wrote " << rows.size() << " feature rows to " << (dir / "features.csv").string()
            << "\n";
  return 0;
}

int cmd_evaluate(const std::string& features_file, const std::string& grid,
                 const std::string& config_path, const std::string& out_dir) {
  const auto rows = io::read_feature_csv(features_file);

  ExperimentConfig config;
  if (!config_path.empty()) {
    config = io::load_config(config_path);
  } else {
    // extract leaves the resolved config next to the CSV; pick it up if present.
    std::filesystem::path sidecar(features_file);
    sidecar.replace_extension(".json");
    if (std::filesystem::exists(sidecar)) config = io::load_config(sidecar);
  }
  config.feature_kind = rows.front().kind;
  if (!grid.empty()) config.c_grid = parse_c_grid(grid);

  const ExperimentReport report = run_loso(rows, config);
  print_warnings(report.warnings);
  io::write_report_files(report, out_dir);
  std::cout << io::render_report_text(report);
  return 0;
}

int cmd_compare(const std::string& manifest_path, const std::string& kinds_csv,
                const std::string& task, const std::string& config_path,
                const std::string& out_dir, bool allow_partial) {
  std::vector<FeatureKind> kinds;
  std::size_t start = 0;
  while (start <= kinds_csv.size()) {
    const auto comma = kinds_csv.find(',', start);
    kinds.push_back(feature_kind_from_string(kinds_csv.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (kinds.size() < 2) {
    throw Error(errc::invalid_argument, "compare needs at least two feature kinds");
  }

  ExperimentConfig config = config_or_default(config_path);
  apply_task(config, task);

  const CorpusManifest manifest = load_manifest(manifest_path);
  const ComparisonReport comparison = compare_features(manifest, kinds, config, allow_partial);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_text(dir / "comparison.json", io::comparison_to_json(comparison));
  write_text(dir / "comparison.txt", io::render_comparison_text(comparison));
  write_text(dir / "comparison.csv", io::render_comparison_csv(comparison));
  for (const auto& entry : comparison.entries) {
    print_warnings(entry.report.warnings);
    io::write_report_files(entry.report, dir / to_string(entry.kind));
  }
  std::cout << io::render_comparison_text(comparison);
  return 0;
}

int cmd_spectrogram(const std::string& wav_path, const std::string& method,
                    const std::string& out_path, double hop_s, double window_s, double delta_f,
                    double r) {
  const SignalBuffer signal = load_wav(wav_path);
  Spectrogram spec;
  if (method == "stft") {
    spec = stft_magnitude(signal, window_s, hop_s);
  } else if (method == "sff") {
    SffConfig config;
    config.r = r;
    config.delta_f_hz = delta_f;
    spec = sff_envelope_frames(signal, config, hop_s);
  } else {
    throw Error(errc::invalid_argument, "method must be stft or sff");
  }
  io::write_spectrogram_csv(spec, out_path);
  std::cout << "wrote " << spec.frames.size() << "x"
            << (spec.frames.empty() ? 0 : spec.frames.front().size()) << " matrix to " << out_path
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-frequency-filtering speech analysis toolkit"};
  app.require_subcommand(1);

  // extract
  std::string ex_manifest, ex_features = "sffcc", ex_task = "all", ex_config, ex_out;
  bool ex_allow_partial = false;
  auto* extract = app.add_subcommand("extract", "Extract per-utterance features from a manifest");
  extract->add_option("--manifest", ex_manifest, "Corpus manifest CSV")->required();
  extract->add_option("--features", ex_features, "mfcc | sffcc | mfcc-sff");
  extract->add_option("--task", ex_task, "vowel | sentence | read_text | all");
  extract->add_option("--config", ex_config, "Experiment config JSON");
  extract->add_option("--out", ex_out, "Output directory")->required();
  extract->add_flag("--allow-partial", ex_allow_partial,
                    "Skip unreadable audio files instead of aborting");

  // evaluate
  std::string ev_features_file, ev_grid, ev_config, ev_out;
  auto* evaluate =
      app.add_subcommand("evaluate", "Run leave-one-speaker-out over extracted features");
  evaluate->add_option("--features-file", ev_features_file, "Feature CSV from extract")
      ->required();
  evaluate->add_option("--grid", ev_grid, "C grid: comma list or decade range like 1e-4..1e4");
  evaluate->add_option("--config", ev_config, "Experiment config JSON");
  evaluate->add_option("--out", ev_out, "Output directory")->required();

  // compare
  std::string cp_manifest, cp_kinds = "mfcc,sffcc,mfcc-sff", cp_task = "all", cp_config, cp_out;
  bool cp_allow_partial = false;
  auto* compare =
      app.add_subcommand("compare", "Evaluate several feature kinds against a baseline");
  compare->add_option("--manifest", cp_manifest, "Corpus manifest CSV")->required();
  compare->add_option("--kinds", cp_kinds, "Comma list; the first kind is the baseline");
  compare->add_option("--task", cp_task, "vowel | sentence | read_text | all");
  compare->add_option("--config", cp_config, "Experiment config JSON");
  compare->add_option("--out", cp_out, "Output directory")->required();
  compare->add_flag("--allow-partial", cp_allow_partial,
                    "Skip unreadable audio files instead of aborting");

  // spectrogram
  std::string sp_wav, sp_method = "stft", sp_out;
  double sp_hop = 0.010, sp_window = 0.030, sp_delta_f = 31.25, sp_r = 0.99;
  auto* spectrogram = app.add_subcommand("spectrogram", "Export a spectrogram matrix as CSV");
  spectrogram->add_option("--wav", sp_wav, "Input WAV file")->required();
  spectrogram->add_option("--method", sp_method, "stft | sff");
  spectrogram->add_option("--out", sp_out, "Output CSV path (JSON sidecar written alongside)")
      ->required();
  spectrogram->add_option("--hop", sp_hop, "Hop in seconds (default 0.010)");
  spectrogram->add_option("--window", sp_window, "STFT window in seconds (default 0.030)");
  spectrogram->add_option("--delta-f", sp_delta_f, "SFF channel spacing in Hz (default 31.25)");
  spectrogram->add_option("--r", sp_r, "SFF pole radius (default 0.99)");

  try {
    app.parse(argc, argv);
    if (extract->parsed()) {
      return cmd_extract(ex_manifest, ex_features, ex_task, ex_config, ex_out, ex_allow_partial);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(ev_features_file, ev_grid, ev_config, ev_out);
    }
    if (compare->parsed()) {
      return cmd_compare(cp_manifest, cp_kinds, cp_task, cp_config, cp_out, cp_allow_partial);
    }
    if (spectrogram->parsed()) {
      return cmd_spectrogram(sp_wav, sp_method, sp_out, sp_hop, sp_window, sp_delta_f, sp_r);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const sffkit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
