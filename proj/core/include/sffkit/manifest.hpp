#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sffkit {

/// Severity classes, in the fixed order used by every confusion matrix and
/// report: 0 = healthy, 1 = mild, 2 = severe.
enum class ClassLabel : int { healthy = 0, mild = 1, severe = 2 };

enum class Task : int { vowel = 0, sentence = 1, read_text = 2 };

inline constexpr int kNumClasses = 3;

const char* to_string(ClassLabel c);
const char* to_string(Task t);
ClassLabel class_label_from_string(const std::string& token);  // accepts names or 0/1/2
Task task_from_string(const std::string& token);

struct ManifestEntry {
  std::string audio_path;  // as written in the manifest; resolve against base_dir
  std::string speaker_id;
  ClassLabel class_label = ClassLabel::healthy;
  Task task = Task::vowel;
  std::string utterance_id;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;  // manifest order preserved
  std::filesystem::path base_dir;      // directory the manifest was loaded from

  /// Resolves an entry's audio path: absolute paths pass through, relative
  /// ones are joined to base_dir.
  std::filesystem::path resolve_audio_path(const ManifestEntry& e) const;
};

/// Parses a corpus manifest CSV with the exact header
///   audio_path,speaker_id,class_label,task,utterance_id
/// Class tokens are healthy|mild|severe or 0|1|2; task tokens are
/// vowel|sentence|read_text. Fields may be double-quoted.
///
/// Errors: errc::file_not_found; errc::manifest_parse (bad header, wrong
/// column count, unknown token); errc::manifest_duplicate_utterance for a
/// repeated (speaker_id, utterance_id) pair; errc::manifest_conflicting_class
/// when one speaker appears with two class labels.
CorpusManifest load_manifest(const std::filesystem::path& path);

struct BalanceReport {
  std::array<int, kNumClasses> speakers_per_class{};
  bool balanced = false;  // true iff all class counts are equal
};

BalanceReport check_balance(const CorpusManifest& manifest);

/// Entries matching a task filter; no filter returns everything.
std::vector<ManifestEntry> filter_by_task(const CorpusManifest& manifest,
                                          std::optional<Task> task);

}  // namespace sffkit
