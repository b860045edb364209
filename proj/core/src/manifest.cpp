#include "sffkit/manifest.hpp"

#include <fstream>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "csv_line.hpp"
#include "sffkit/error.hpp"

namespace sffkit {

using detail::split_csv_line;
using detail::strip_cr;

const char* to_string(ClassLabel c) {
  switch (c) {
    case ClassLabel::healthy: return "healthy";
    case ClassLabel::mild: return "mild";
    default: return "severe";
  }
}

const char* to_string(Task t) {
  switch (t) {
    case Task::vowel: return "vowel";
    case Task::sentence: return "sentence";
    default: return "read_text";
  }
}

ClassLabel class_label_from_string(const std::string& token) {
  if (token == "healthy" || token == "0") return ClassLabel::healthy;
  if (token == "mild" || token == "1") return ClassLabel::mild;
  if (token == "severe" || token == "2") return ClassLabel::severe;
  throw Error(errc::manifest_parse, "unknown class label '" + token + "'");
}

Task task_from_string(const std::string& token) {
  if (token == "vowel") return Task::vowel;
  if (token == "sentence") return Task::sentence;
  if (token == "read_text") return Task::read_text;
  throw Error(errc::manifest_parse, "unknown task '" + token + "'");
}

std::filesystem::path CorpusManifest::resolve_audio_path(const ManifestEntry& e) const {
  std::filesystem::path p(e.audio_path);
  return p.is_absolute() ? p : base_dir / p;
}

CorpusManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::file_not_found, "load_manifest: cannot open " + path.string());

  const std::string expected_header = "audio_path,speaker_id,class_label,task,utterance_id";
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(errc::manifest_parse, "load_manifest: " + path.string() + ": empty file");
  }
  if (strip_cr(line) != expected_header) {
    throw Error(errc::manifest_parse,
                "load_manifest: " + path.string() + ": header must be exactly '" + expected_header + "'");
  }

  CorpusManifest manifest;
  manifest.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");

  std::set<std::pair<std::string, std::string>> seen_utterances;
  std::map<std::string, ClassLabel> speaker_class;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line, line_no);
    if (fields.size() != 5) {
      throw Error(errc::manifest_parse, "load_manifest: " + path.string() + ": line " +
                                            std::to_string(line_no) + ": expected 5 fields, got " +
                                            std::to_string(fields.size()));
    }
    ManifestEntry e;
    e.audio_path = fields[0];
    e.speaker_id = fields[1];
    try {
      e.class_label = class_label_from_string(fields[2]);
      e.task = task_from_string(fields[3]);
    } catch (const Error& err) {
      throw Error(errc::manifest_parse, "load_manifest: " + path.string() + ": line " +
                                            std::to_string(line_no) + ": " + err.what());
    }
    e.utterance_id = fields[4];
    if (e.audio_path.empty() || e.speaker_id.empty() || e.utterance_id.empty()) {
      throw Error(errc::manifest_parse, "load_manifest: " + path.string() + ": line " +
                                            std::to_string(line_no) + ": empty field");
    }

    if (!seen_utterances.emplace(e.speaker_id, e.utterance_id).second) {
      throw Error(errc::manifest_duplicate_utterance,
                  "load_manifest: duplicate utterance '" + e.utterance_id + "' for speaker '" +
                      e.speaker_id + "'");
    }
    const auto [it, inserted] = speaker_class.emplace(e.speaker_id, e.class_label);
    if (!inserted && it->second != e.class_label) {
      throw Error(errc::manifest_conflicting_class,
                  "load_manifest: speaker '" + e.speaker_id + "' appears with class '" +
                      to_string(it->second) + "' and '" + to_string(e.class_label) + "'");
    }
    manifest.entries.push_back(std::move(e));
  }
  return manifest;
}

BalanceReport check_balance(const CorpusManifest& manifest) {
  std::set<std::string> speakers[kNumClasses];
  for (const auto& e : manifest.entries) {
    speakers[static_cast<int>(e.class_label)].insert(e.speaker_id);
  }
  BalanceReport report;
  for (int c = 0; c < kNumClasses; ++c) {
    report.speakers_per_class[static_cast<std::size_t>(c)] = static_cast<int>(speakers[c].size());
  }
  report.balanced = true;
  for (int c = 1; c < kNumClasses; ++c) {
    if (report.speakers_per_class[static_cast<std::size_t>(c)] != report.speakers_per_class[0]) {
      report.balanced = false;
    }
  }
  return report;
}

std::vector<ManifestEntry> filter_by_task(const CorpusManifest& manifest, std::optional<Task> task) {
  std::vector<ManifestEntry> out;
  for (const auto& e : manifest.entries) {
    if (!task || e.task == *task) out.push_back(e);
  }
  return out;
}

}  // namespace sffkit
