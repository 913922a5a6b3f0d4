#include "cefr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <numbers>
#include <regex>

#include <nlohmann/json.hpp>

namespace cefr {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vector_json(const LevelVector& vector) {
  json array = json::array();
  for (auto count : vector.counts()) array.push_back(count);
  return array;
}

LevelVector vector_from(const json& array) {
  if (!array.is_array() || array.size() != kLevelCount) {
    throw std::invalid_argument("level vector must have six entries");
  }
  LevelVector vector;
  for (Level level : kAllLevels) vector[level] = array.at(ordinal(level)).get<std::uint64_t>();
  return vector;
}

json periods_json(const PeriodMap& periods) {
  json object = json::object();
  for (const auto& [key, vector] : periods) object[key] = vector_json(vector);
  return object;
}

PeriodMap periods_from(const json& object) {
  PeriodMap periods;
  for (const auto& [key, value] : object.items()) periods[key] = vector_from(value);
  return periods;
}

json identity_json(const ContributorId& id, bool show_names) {
  json object = {{"id", id.anon_id}};
  if (show_names) object["name"] = id.raw_name;
  return object;
}

ContributorId identity_from(const json& object) {
  ContributorId id;
  id.anon_id = object.at("id").get<std::string>();
  if (object.contains("name")) id.raw_name = object.at("name").get<std::string>();
  return id;
}

json advanced_json(const AdvancedCounts& counts) {
  return {{"C1", counts.c1}, {"C2", counts.c2}};
}

AdvancedCounts advanced_from(const json& object) {
  return {object.at("C1").get<std::uint64_t>(), object.at("C2").get<std::uint64_t>()};
}

std::int64_t parse_utc(const std::string& text) {
  std::tm utc{};
  if (!strptime(text.c_str(), "%Y-%m-%dT%H:%M:%SZ", &utc)) {
    throw std::invalid_argument("bad timestamp " + text);
  }
  return static_cast<std::int64_t>(timegm(&utc));
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("cannot write " + path.string());
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

constexpr std::array<std::string_view, kLevelCount> kLevelColors = {
    "#9ecae1", "#6baed6", "#74c476", "#31a354", "#fd8d3c", "#e6550d"};

double axis_angle(std::size_t axis) {
  return -std::numbers::pi / 2 + static_cast<double>(axis) * 2 * std::numbers::pi / kLevelCount;
}

std::string radar_svg(const LevelVector& vector, std::string_view title) {
  constexpr double size = 260, center = size / 2, radius = 95;
  std::string svg = "<svg class=\"radar\" viewBox=\"0 0 " + fixed(size) + " " + fixed(size) +
                    "\" width=\"" + fixed(size) + "\" height=\"" + fixed(size) +
                    "\" role=\"img\" aria-label=\"" + escape_html(title) + "\">\n";
  for (int ring = 1; ring <= 4; ++ring) {
    LevelVector grid(std::array<LevelVector::Count, kLevelCount>{1, 1, 1, 1, 1, 1});
    svg += "  <polygon class=\"grid\" points=\"" +
           radar_points(grid, center, center, radius * ring / 4) +
           "\" fill=\"none\" stroke=\"#ddd\"/>\n";
  }
  for (std::size_t axis = 0; axis < kLevelCount; ++axis) {
    const double x = center + radius * std::cos(axis_angle(axis));
    const double y = center + radius * std::sin(axis_angle(axis));
    const double lx = center + (radius + 18) * std::cos(axis_angle(axis));
    const double ly = center + (radius + 18) * std::sin(axis_angle(axis));
    svg += "  <line x1=\"" + fixed(center) + "\" y1=\"" + fixed(center) + "\" x2=\"" + fixed(x) +
           "\" y2=\"" + fixed(y) + "\" stroke=\"#ccc\"/>\n";
    svg += "  <text x=\"" + fixed(lx) + "\" y=\"" + fixed(ly + 4) +
           "\" text-anchor=\"middle\" font-size=\"12\">" +
           std::string(to_string(kAllLevels[axis])) + "</text>\n";
  }
  svg += "  <polygon class=\"value\" points=\"" + radar_points(vector, center, center, radius) +
         "\" fill=\"#3182bd\" fill-opacity=\"0.35\" stroke=\"#3182bd\" stroke-width=\"2\"/>\n";
  LevelVector::Count max = 0;
  for (auto count : vector.counts()) max = std::max(max, count);
  svg += "  <text x=\"4\" y=\"" + fixed(size - 6) + "\" font-size=\"11\" fill=\"#555\">max " +
         std::to_string(max) + "</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string timeline_svg(const PeriodMap& periods) {
  constexpr double height = 220, top = 10, bottom = 40, left = 50, bar = 28, gap = 10;
  const double width = left + std::max<double>(1, static_cast<double>(periods.size())) * (bar + gap) + 20;
  LevelVector::Count max = 0;
  for (const auto& [key, vector] : periods) max = std::max(max, vector.total());
  const double plot = height - top - bottom;
  std::string svg = "<svg class=\"timeline\" viewBox=\"0 0 " + fixed(width) + " " + fixed(height) +
                    "\" width=\"" + fixed(width) + "\" height=\"" + fixed(height) +
                    "\" role=\"img\" aria-label=\"added constructs per period\">\n";
  svg += "  <line x1=\"" + fixed(left) + "\" y1=\"" + fixed(top + plot) + "\" x2=\"" +
         fixed(width - 10) + "\" y2=\"" + fixed(top + plot) + "\" stroke=\"#999\"/>\n";
  svg += "  <text x=\"" + fixed(left - 6) + "\" y=\"" + fixed(top + 10) +
         "\" text-anchor=\"end\" font-size=\"11\">" + std::to_string(max) + "</text>\n";
  double x = left + gap / 2;
  for (const auto& [key, vector] : periods) {
    double y = top + plot;
    for (Level level : kAllLevels) {
      const double h = max == 0 ? 0 : plot * static_cast<double>(vector[level]) / static_cast<double>(max);
      y -= h;
      svg += "  <rect x=\"" + fixed(x) + "\" y=\"" + fixed(y) + "\" width=\"" + fixed(bar) +
             "\" height=\"" + fixed(h) + "\" fill=\"" + std::string(kLevelColors[ordinal(level)]) +
             "\"><title>" + escape_html(key) + " " + std::string(to_string(level)) + ": " +
             std::to_string(vector[level]) + "</title></rect>\n";
    }
    svg += "  <text x=\"" + fixed(x + bar / 2) + "\" y=\"" + fixed(top + plot + 14) +
           "\" text-anchor=\"end\" font-size=\"10\" transform=\"rotate(-45 " + fixed(x + bar / 2) +
           " " + fixed(top + plot + 14) + ")\">" + escape_html(key) + "</text>\n";
    x += bar + gap;
  }
  svg += "</svg>\n";
  return svg;
}

std::string legend_html() {
  std::string html = "<p class=\"legend\">";
  for (Level level : kAllLevels) {
    html += "<span><i style=\"background:" + std::string(kLevelColors[ordinal(level)]) +
            "\"></i>" + std::string(to_string(level)) + "</span> ";
  }
  return html + "</p>\n";
}

std::string vector_row(std::string_view label, const LevelVector& vector) {
  std::string row = "<tr><th>" + escape_html(label) + "</th>";
  for (auto count : vector.counts()) row += "<td>" + std::to_string(count) + "</td>";
  return row + "</tr>\n";
}

std::string level_header(std::string_view first) {
  std::string row = "<tr><th>" + std::string(first) + "</th>";
  for (Level level : kAllLevels) row += "<th>" + std::string(to_string(level)) + "</th>";
  return row + "</tr>\n";
}

}  // namespace

ProjectReport assemble_report(const std::vector<CommitScore>& scores, Period period,
                              const std::vector<std::string>& bot_patterns,
                              const ReportMetadata& metadata) {
  ProjectReport report;
  report.repo = metadata.repo;
  report.head_sha = metadata.head_sha;
  report.generated_at = metadata.generated_at;
  report.catalog_version = metadata.catalog_version;
  report.period = period;

  const auto rollup = project_rollup(scores, period);
  report.project_total = rollup.total;
  report.project_by_period = rollup.by_period;
  for (const auto& score : scores) {
    ++report.commits_analyzed;
    report.files_analyzed += score.files_analyzed;
    report.files_skipped += score.files_skipped;
  }

  std::vector<std::regex> bots;
  for (const auto& pattern : bot_patterns) {
    if (!pattern.empty()) bots.emplace_back(pattern);
  }
  for (auto& profile : build_profiles(scores, period)) {
    const bool is_bot = std::any_of(bots.begin(), bots.end(), [&](const std::regex& re) {
      return std::regex_search(profile.contributor.raw_name, re);
    });
    if (is_bot) {
      report.excluded_total += profile.total;
      ++report.excluded_contributors;
    } else {
      report.profiles.push_back(std::move(profile));
    }
  }
  if (!report.profiles.empty()) {
    report.top_contributor = most_proficient_contributor(report.profiles);
  }
  return report;
}

std::string display_name(const ContributorId& id, bool show_names) {
  if (show_names && !id.raw_name.empty()) return id.raw_name;
  return id.anon_id;
}

std::string format_utc(std::int64_t timestamp) {
  const std::time_t t = static_cast<std::time_t>(timestamp);
  std::tm utc{};
  gmtime_r(&t, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string render_json(const ProjectReport& report, const EmitOptions& options) {
  json contributors = json::array();
  for (const auto& profile : report.profiles) {
    json entry = identity_json(profile.contributor, options.show_names);
    entry["total"] = vector_json(profile.total);
    entry["by_period"] = periods_json(profile.by_period);
    entry["commit_count"] = profile.commit_count;
    contributors.push_back(std::move(entry));
  }
  json top = nullptr;
  if (report.top_contributor) {
    top = identity_json(report.top_contributor->contributor, options.show_names);
    json periods = json::object();
    for (const auto& [key, counts] : report.top_contributor->by_period) {
      periods[key] = advanced_json(counts);
    }
    top["by_period"] = std::move(periods);
    top["total"] = advanced_json(report.top_contributor->total);
  }
  const json document = {
      {"schema_version", report.schema_version},
      {"repo", {{"source", report.repo}, {"head", report.head_sha}}},
      {"generated_at", format_utc(report.generated_at)},
      {"catalog_version", report.catalog_version},
      {"period", to_string(report.period)},
      {"levels", {"A1", "A2", "B1", "B2", "C1", "C2"}},
      {"project_total", vector_json(report.project_total)},
      {"project_by_period", periods_json(report.project_by_period)},
      {"contributors", std::move(contributors)},
      {"excluded_total", vector_json(report.excluded_total)},
      {"excluded_contributors", report.excluded_contributors},
      {"top_contributor", std::move(top)},
      {"stats",
       {{"commits_analyzed", report.commits_analyzed},
        {"files_analyzed", report.files_analyzed},
        {"files_skipped", report.files_skipped}}},
  };
  return document.dump(2) + "\n";
}

ProjectReport parse_report_json(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
    ProjectReport report;
    report.schema_version = document.at("schema_version").get<std::string>();
    report.repo = document.at("repo").at("source").get<std::string>();
    report.head_sha = document.at("repo").at("head").get<std::string>();
    report.generated_at = parse_utc(document.at("generated_at").get<std::string>());
    report.catalog_version = document.at("catalog_version").get<std::string>();
    const auto period = document.at("period").get<std::string>();
    if (period != "yearly" && period != "monthly") throw std::invalid_argument("bad period " + period);
    report.period = period == "monthly" ? Period::Monthly : Period::Yearly;
    report.project_total = vector_from(document.at("project_total"));
    report.project_by_period = periods_from(document.at("project_by_period"));
    for (const auto& entry : document.at("contributors")) {
      ContributorProfile profile;
      profile.contributor = identity_from(entry);
      profile.total = vector_from(entry.at("total"));
      profile.by_period = periods_from(entry.at("by_period"));
      profile.commit_count = entry.at("commit_count").get<std::uint64_t>();
      report.profiles.push_back(std::move(profile));
    }
    report.excluded_total = vector_from(document.at("excluded_total"));
    report.excluded_contributors = document.at("excluded_contributors").get<std::uint64_t>();
    if (const auto& top = document.at("top_contributor"); !top.is_null()) {
      TopContributor parsed;
      parsed.contributor = identity_from(top);
      for (const auto& [key, counts] : top.at("by_period").items()) {
        parsed.by_period[key] = advanced_from(counts);
      }
      parsed.total = advanced_from(top.at("total"));
      report.top_contributor = std::move(parsed);
    }
    const auto& stats = document.at("stats");
    report.commits_analyzed = stats.at("commits_analyzed").get<std::uint64_t>();
    report.files_analyzed = stats.at("files_analyzed").get<std::uint64_t>();
    report.files_skipped = stats.at("files_skipped").get<std::uint64_t>();
    return report;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

std::string render_csv(const ProjectReport& report) {
  std::string csv = "period,A1,A2,B1,B2,C1,C2\n";
  auto row = [&csv](std::string_view label, const LevelVector& vector) {
    csv += label;
    for (auto count : vector.counts()) csv += "," + std::to_string(count);
    csv += "\n";
  };
  for (const auto& [key, vector] : report.project_by_period) row(key, vector);
  row("total", report.project_total);
  return csv;
}

std::string radar_points(const LevelVector& vector, double center_x, double center_y,
                         double radius) {
  LevelVector::Count max = 0;
  for (auto count : vector.counts()) max = std::max(max, count);
  std::string points;
  for (std::size_t axis = 0; axis < kLevelCount; ++axis) {
    const double r = max == 0 ? 0
                              : radius * static_cast<double>(vector.counts()[axis]) /
                                    static_cast<double>(max);
    if (!points.empty()) points += ' ';
    points += fixed(center_x + r * std::cos(axis_angle(axis))) + "," +
              fixed(center_y + r * std::sin(axis_angle(axis)));
  }
  return points;
}

std::string render_html(const ProjectReport& report, const EmitOptions& options) {
  std::string html;
  html += "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<title>Code proficiency: " + escape_html(report.repo) + "</title>\n";
  html +=
      "<style>\n"
      "body{font-family:sans-serif;margin:2em;color:#222}\n"
      "table{border-collapse:collapse;margin:1em 0}\n"
      "th,td{border:1px solid #ccc;padding:2px 8px;text-align:right}\n"
      ".contributors{display:flex;flex-wrap:wrap;gap:1em}\n"
      ".contributor{border:1px solid #eee;padding:0.5em}\n"
      ".legend i{display:inline-block;width:10px;height:10px;margin-right:4px}\n"
      "</style>\n</head>\n<body>\n";
  html += "<h1>Code proficiency: " + escape_html(report.repo) + "</h1>\n";
  html += "<p>HEAD " + escape_html(report.head_sha) + " at " + format_utc(report.generated_at) +
          "; " + std::to_string(report.commits_analyzed) + " commits, " +
          std::to_string(report.files_analyzed) + " file changes analyzed, " +
          std::to_string(report.files_skipped) + " skipped; catalog " +
          escape_html(report.catalog_version) + ".</p>\n";

  html += "<section class=\"project\">\n<h2>Project</h2>\n";
  html += radar_svg(report.project_total, "project proficiency");
  html += "<h3>Added constructs per " +
          std::string(report.period == Period::Monthly ? "month" : "year") + "</h3>\n";
  html += timeline_svg(report.project_by_period);
  html += legend_html();
  html += "<table>\n" + level_header("Period");
  for (const auto& [key, vector] : report.project_by_period) html += vector_row(key, vector);
  html += vector_row("Total", report.project_total);
  html += "</table>\n</section>\n";

  if (report.top_contributor) {
    const auto& top = *report.top_contributor;
    html += "<section class=\"top\">\n<h2>Most proficient contributor: " +
            escape_html(display_name(top.contributor, options.show_names)) + "</h2>\n";
    html += "<table>\n<tr><th>Period</th><th>C1</th><th>C2</th></tr>\n";
    for (const auto& [key, counts] : top.by_period) {
      html += "<tr><th>" + escape_html(key) + "</th><td>" + std::to_string(counts.c1) +
              "</td><td>" + std::to_string(counts.c2) + "</td></tr>\n";
    }
    html += "<tr><th>Total</th><td>" + std::to_string(top.total.c1) + "</td><td>" +
            std::to_string(top.total.c2) + "</td></tr>\n</table>\n</section>\n";
  }

  std::vector<const ContributorProfile*> shown;
  for (const auto& profile : report.profiles) shown.push_back(&profile);
  std::stable_sort(shown.begin(), shown.end(), [](const auto* a, const auto* b) {
    return a->total.total() > b->total.total();
  });
  if (shown.size() > options.top_n) shown.resize(options.top_n);
  html += "<h2>Contributors</h2>\n<div class=\"contributors\">\n";
  for (const auto* profile : shown) {
    const auto name = display_name(profile->contributor, options.show_names);
    html += "<section class=\"contributor\">\n<h3>" + escape_html(name) + "</h3>\n";
    html += radar_svg(profile->total, name);
    html += "<p>" + std::to_string(profile->commit_count) + " commits, " +
            std::to_string(profile->total.total()) + " constructs added</p>\n</section>\n";
  }
  html += "</div>\n";
  if (report.excluded_contributors > 0) {
    html += "<p>" + std::to_string(report.excluded_contributors) +
            " automated identities excluded; they added " +
            std::to_string(report.excluded_total.total()) + " constructs.</p>\n";
  }
  html += "</body>\n</html>\n";
  return html;
}

void emit_json(const ProjectReport& report, const fs::path& path, const EmitOptions& options) {
  write_file(path, render_json(report, options));
}

void emit_csv(const ProjectReport& report, const fs::path& path) {
  write_file(path, render_csv(report));
}

void emit_html(const ProjectReport& report, const fs::path& path, const EmitOptions& options) {
  write_file(path, render_html(report, options));
}

}  // namespace cefr
