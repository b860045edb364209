#pragma once

#include <filesystem>
#include <random>
#include <string>

namespace testsupport {

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    std::mt19937_64 rng(std::random_device{}());
    for (int attempt = 0; attempt < 16; ++attempt) {
      auto candidate = std::filesystem::temp_directory_path() /
                       (tag + "-" + std::to_string(rng() & 0xffffffffULL));
      std::error_code ec;
      if (std::filesystem::create_directories(candidate, ec) && !ec) {
        path = candidate;
        return;
      }
    }
    throw std::runtime_error("TempDir: could not create scratch directory");
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::filesystem::path file(const std::string& name) const { return path / name; }
};

}  // namespace testsupport
