#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cefr/catalog.hpp"
#include "cefr/history_miner.hpp"
#include "cefr/level.hpp"

namespace cefr {

struct CommitScore {
  std::string sha;
  ContributorId contributor;
  std::int64_t timestamp = 0;
  LevelVector delta;
  std::uint64_t files_analyzed = 0;
  std::uint64_t files_skipped = 0;
};

/// Component-wise max(after - before, 0).
LevelVector commit_delta(const LevelVector& before, const LevelVector& after);

/// Result of scoring one file change.
struct FileScore {
  LevelVector delta;
  /// False when either side failed to parse; delta is then zero.
  bool analyzed = true;
  std::string diagnostic;
};

FileScore score_file_change(const FileChange& change, const Catalog& catalog);

/// Sums the clamped per-file deltas. Files that fail to parse on either
/// side count as skipped and contribute nothing.
CommitScore score_commit(const CommitRecord& record, const Catalog& catalog);

enum class Period { Monthly, Yearly };

std::string_view to_string(Period period);

/// UTC bucket of a timestamp: "YYYY" or "YYYY-MM".
std::string period_key(std::int64_t timestamp, Period period);

using PeriodMap = std::map<std::string, LevelVector>;

struct ContributorProfile {
  ContributorId contributor;
  LevelVector total;
  PeriodMap by_period;
  std::uint64_t commit_count = 0;
};

/// True when `a` ranks before `b`: more C1+C2, then larger total, then
/// smaller anon_id (then smaller identity key).
bool ranks_before(const ContributorProfile& a, const ContributorProfile& b);

/// One profile per contributor key, in ranking order. The identity shown
/// for a contributor is the one on its earliest scored commit.
std::vector<ContributorProfile> build_profiles(const std::vector<CommitScore>& scores,
                                               Period period);

struct ProjectRollup {
  PeriodMap by_period;
  LevelVector total;
};

ProjectRollup project_rollup(const std::vector<CommitScore>& scores, Period period);

class EmptyInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AdvancedCounts {
  LevelVector::Count c1 = 0;
  LevelVector::Count c2 = 0;

  friend bool operator==(const AdvancedCounts&, const AdvancedCounts&) = default;
};

struct TopContributor {
  ContributorId contributor;
  /// Per-period C1 and C2 counts.
  std::map<std::string, AdvancedCounts> by_period;
  AdvancedCounts total;
};

/// Throws EmptyInput when `profiles` is empty.
TopContributor most_proficient_contributor(const std::vector<ContributorProfile>& profiles);

}  // namespace cefr
