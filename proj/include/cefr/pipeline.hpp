#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cefr/catalog.hpp"
#include "cefr/history_miner.hpp"
#include "cefr/report.hpp"
#include "cefr/scoring.hpp"

namespace cefr {

struct RunConfig {
  std::string source;
  std::filesystem::path out_dir = "cefr-report";
  Period period = Period::Yearly;
  std::optional<std::filesystem::path> catalog_path;
  std::size_t top_n = 10;
  bool show_names = false;
  std::vector<std::string> bot_patterns{std::string(kDefaultBotPattern)};
  IdentityMode identity = IdentityMode::Author;
  unsigned jobs = 1;
  /// Clone cache; empty means cache_directory().
  std::filesystem::path cache_dir;
};

/// Called with (commits scored, commits total) as work completes.
using ProgressFn = std::function<void(std::size_t, std::size_t)>;

/// Scores every commit, `jobs` at a time. Blob analyses are shared between
/// commits; results come back in commit order whatever the schedule.
/// Parse failures are described in `diagnostics` (in commit order) when
/// it is non-null.
std::vector<CommitScore> score_history(const Repository& repo,
                                       const std::vector<CommitRecord>& commits,
                                       const Catalog& catalog, unsigned jobs,
                                       std::vector<std::string>* diagnostics = nullptr,
                                       const ProgressFn& progress = {});

struct RunOutcome {
  ProjectReport report;
  std::vector<std::string> diagnostics;
};

/// prepare_repo, extract_commits, score_history and assemble_report.
/// Throws RepoError or CatalogError.
RunOutcome run_analysis(const RunConfig& config, const ProgressFn& progress = {});

/// Writes report.json, report.csv, report.html and run.log into
/// config.out_dir. Throws IoError.
void write_outputs(const RunConfig& config, const RunOutcome& outcome);

}  // namespace cefr
