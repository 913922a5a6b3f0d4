#pragma once

#include <cstdint>
#include <filesystem>

namespace cefr::testing {

struct SyntheticShape {
  int commits = 500;
  int authors = 8;
  std::uint64_t seed = 1;
};

struct SyntheticStats {
  int commits = 0;
  int python_files = 0;
  std::uint64_t python_lines = 0;
};

/// Writes a git repository with a generated history of Python modules that
/// grow, shrink, get renamed and get deleted, streamed through
/// `git fast-import`. The same shape always yields the same commits.
SyntheticStats make_synthetic_repo(const std::filesystem::path& dir, const SyntheticShape& shape);

}  // namespace cefr::testing
