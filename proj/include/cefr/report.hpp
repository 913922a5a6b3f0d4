#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cefr/scoring.hpp"

namespace cefr {

inline constexpr std::string_view kSchemaVersion = "1.0";

inline constexpr std::string_view kDefaultBotPattern = R"(\[bot\]$)";

struct ProjectReport {
  std::string schema_version{kSchemaVersion};
  std::string repo;
  std::string head_sha;
  /// Commit time of HEAD, so that reruns on the same state are identical.
  std::int64_t generated_at = 0;
  Period period = Period::Yearly;
  std::string catalog_version;

  LevelVector project_total;
  PeriodMap project_by_period;
  /// Contributor profiles in ranking order, bot identities removed.
  std::vector<ContributorProfile> profiles;
  /// What the removed identities added; project_total is the sum of all
  /// profile totals plus this.
  LevelVector excluded_total;
  std::uint64_t excluded_contributors = 0;
  std::optional<TopContributor> top_contributor;

  std::uint64_t commits_analyzed = 0;
  std::uint64_t files_analyzed = 0;
  std::uint64_t files_skipped = 0;
};

struct ReportMetadata {
  std::string repo;
  std::string head_sha;
  std::int64_t generated_at = 0;
  std::string catalog_version;
};

/// Builds the report from commit scores. Contributors whose name matches
/// any of `bot_patterns` (ECMAScript regex, searched) are moved to the
/// excluded bucket; an empty pattern matches nothing.
ProjectReport assemble_report(const std::vector<CommitScore>& scores, Period period,
                              const std::vector<std::string>& bot_patterns,
                              const ReportMetadata& metadata);

struct EmitOptions {
  bool show_names = false;
  /// Contributor charts in the HTML document.
  std::size_t top_n = 10;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Label used for a contributor in outputs.
std::string display_name(const ContributorId& id, bool show_names);

std::string format_utc(std::int64_t timestamp);

std::string render_json(const ProjectReport& report, const EmitOptions& options = {});
std::string render_csv(const ProjectReport& report);
std::string render_html(const ProjectReport& report, const EmitOptions& options = {});

/// Inverse of render_json for every numeric field and identity label.
/// Throws std::invalid_argument on malformed input.
ProjectReport parse_report_json(std::string_view text);

/// Write the rendered documents; throw IoError when the file cannot be
/// written.
void emit_json(const ProjectReport& report, const std::filesystem::path& path,
               const EmitOptions& options = {});
void emit_csv(const ProjectReport& report, const std::filesystem::path& path);
void emit_html(const ProjectReport& report, const std::filesystem::path& path,
               const EmitOptions& options = {});

/// SVG polygon points for a radar chart of `vector`, scaled so the largest
/// component reaches `radius`. Axes run clockwise from the top, A1 first.
std::string radar_points(const LevelVector& vector, double center_x, double center_y,
                         double radius);

}  // namespace cefr
