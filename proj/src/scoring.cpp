#include "cefr/scoring.hpp"

#include <algorithm>
#include <ctime>
#include <tuple>

#include "cefr/analyzer.hpp"

namespace cefr {

LevelVector commit_delta(const LevelVector& before, const LevelVector& after) {
  LevelVector delta;
  for (Level level : kAllLevels) {
    delta[level] = after[level] > before[level] ? after[level] - before[level] : 0;
  }
  return delta;
}

FileScore score_file_change(const FileChange& change, const Catalog& catalog) {
  FileScore score;
  LevelVector sides[2];
  const std::optional<std::string>* texts[2] = {&change.before_text, &change.after_text};
  for (int i = 0; i < 2; ++i) {
    if (!*texts[i]) continue;
    auto result = analyze_source(**texts[i], catalog);
    if (!result.parse_ok) {
      score.analyzed = false;
      score.diagnostic = (i == 0 ? "before: " : "after: ") + result.diagnostic;
      return score;
    }
    sides[i] = result.vector;
  }
  score.delta = commit_delta(sides[0], sides[1]);
  return score;
}

CommitScore score_commit(const CommitRecord& record, const Catalog& catalog) {
  CommitScore score{record.sha, record.contributor, record.timestamp, {}, 0, 0};
  for (const auto& change : record.changes) {
    const FileScore file = score_file_change(change, catalog);
    if (file.analyzed) {
      score.delta += file.delta;
      ++score.files_analyzed;
    } else {
      ++score.files_skipped;
    }
  }
  return score;
}

std::string_view to_string(Period period) {
  return period == Period::Monthly ? "monthly" : "yearly";
}

std::string period_key(std::int64_t timestamp, Period period) {
  const std::time_t t = static_cast<std::time_t>(timestamp);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buffer[16];
  std::strftime(buffer, sizeof buffer, period == Period::Monthly ? "%Y-%m" : "%Y", &utc);
  return buffer;
}

bool ranks_before(const ContributorProfile& a, const ContributorProfile& b) {
  const auto rank = [](const ContributorProfile& p) {
    return std::make_tuple(p.total.advanced(), p.total.total());
  };
  if (rank(a) != rank(b)) return rank(a) > rank(b);
  if (a.contributor.anon_id != b.contributor.anon_id) {
    return a.contributor.anon_id < b.contributor.anon_id;
  }
  return a.contributor.key() < b.contributor.key();
}

std::vector<ContributorProfile> build_profiles(const std::vector<CommitScore>& scores,
                                               Period period) {
  struct Entry {
    ContributorProfile profile;
    std::int64_t first_time = 0;
    std::string first_sha;
  };
  std::map<std::string, Entry> by_key;
  for (const auto& score : scores) {
    auto [it, inserted] = by_key.try_emplace(score.contributor.key());
    Entry& entry = it->second;
    // Keep the identity of the earliest commit so the result does not
    // depend on input order.
    if (inserted || std::tie(score.timestamp, score.sha) <
                        std::tie(entry.first_time, entry.first_sha)) {
      entry.profile.contributor = score.contributor;
      entry.first_time = score.timestamp;
      entry.first_sha = score.sha;
    }
    entry.profile.total += score.delta;
    entry.profile.by_period[period_key(score.timestamp, period)] += score.delta;
    ++entry.profile.commit_count;
  }
  std::vector<ContributorProfile> profiles;
  profiles.reserve(by_key.size());
  for (auto& [key, entry] : by_key) profiles.push_back(std::move(entry.profile));
  std::sort(profiles.begin(), profiles.end(), ranks_before);
  return profiles;
}

ProjectRollup project_rollup(const std::vector<CommitScore>& scores, Period period) {
  ProjectRollup rollup;
  for (const auto& score : scores) {
    rollup.by_period[period_key(score.timestamp, period)] += score.delta;
    rollup.total += score.delta;
  }
  return rollup;
}

TopContributor most_proficient_contributor(const std::vector<ContributorProfile>& profiles) {
  if (profiles.empty()) throw EmptyInput("no contributor profiles");
  const auto& best = *std::min_element(profiles.begin(), profiles.end(), ranks_before);
  TopContributor top;
  top.contributor = best.contributor;
  for (const auto& [key, vector] : best.by_period) {
    top.by_period[key] = AdvancedCounts{vector[Level::C1], vector[Level::C2]};
  }
  top.total = AdvancedCounts{best.total[Level::C1], best.total[Level::C2]};
  return top;
}

}  // namespace cefr
