#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cefr/catalog.hpp"
#include "cefr/level.hpp"
#include "fixture_repo.hpp"

namespace cefr::testing {

struct OracleCommit {
  LevelVector delta;
  std::uint64_t files_analyzed = 0;
  std::uint64_t files_skipped = 0;
};

struct OracleContributor {
  LevelVector total;
  std::map<std::string, LevelVector> by_period;
  std::uint64_t commits = 0;
};

struct OracleResult {
  /// Non-merge commits by sha.
  std::map<std::string, OracleCommit> commits;
  /// Keyed by lowercased, trimmed author email.
  std::map<std::string, OracleContributor> contributors;
  std::map<std::string, LevelVector> by_period;
  LevelVector total;
};

/// Recomputes everything from full snapshots: every scripted non-merge
/// commit and its parent are exported with git archive, every .py file is
/// analyzed whole, and files are paired by path or by the script's rename
/// log. `monthly` picks "YYYY-MM" period keys instead of "YYYY".
OracleResult brute_force(const FixtureRepo& repo, const Catalog& catalog, bool monthly = false);

}  // namespace cefr::testing
