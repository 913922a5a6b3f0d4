// Checks the nine acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.
//
// CEFR_PERF_REPO=<path or URL> replaces the generated history used by the
// performance check with a real repository.
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "brute_force.hpp"
#include "cefr/analyzer.hpp"
#include "cefr/catalog.hpp"
#include "cefr/construct_kinds.hpp"
#include "cefr/pipeline.hpp"
#include "cefr/process.hpp"
#include "corpus.hpp"
#include "fixture_repo.hpp"
#include "synthetic_repo.hpp"

namespace {

namespace fs = std::filesystem;
using cefr::LevelVector;
using namespace cefr::testing;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool condition, const std::string& why) {
    if (!condition && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string str(const LevelVector& v) {
  std::string out = "{";
  for (auto level : cefr::kAllLevels) {
    out += (level == cefr::Level::A1 ? "" : ",") + std::to_string(v[level]);
  }
  return out + "}";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fixed1(double value) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(1);
  s << value;
  return s.str();
}

// The three scripted histories, built once.
struct Fixtures {
  TempDir dir{"cefr-acceptance"};
  std::vector<std::pair<std::string, FixtureRepo>> repos;

  Fixtures() {
    repos.emplace_back("linear", make_linear_fixture(dir.path() / "linear"));
    repos.emplace_back("merge", make_merge_fixture(dir.path() / "merge"));
    repos.emplace_back("rename", make_rename_fixture(dir.path() / "rename"));
  }
};

cefr::RunConfig config_for(const FixtureRepo& repo, const fs::path& out, unsigned jobs) {
  cefr::RunConfig config;
  config.source = repo.path().string();
  config.out_dir = out;
  config.jobs = jobs;
  return config;
}

Outcome criterion1() {
  Outcome o;
  const auto delta = cefr::commit_delta(LevelVector({46, 41, 25, 14, 12, 3}),
                                        LevelVector({57, 49, 31, 12, 13, 8}));
  o.detail = "delta " + str(delta);
  o.require(delta == LevelVector({11, 8, 6, 0, 1, 5}), "delta " + str(delta) + " != {11,8,6,0,1,5}");
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto catalog = cefr::load_catalog(std::nullopt);
  const std::pair<const char*, cefr::Level> seeds[] = {
      {"if_statement", cefr::Level::A1},       {"nested_list", cefr::Level::A2},
      {"break_statement", cefr::Level::B1},    {"list_comprehension", cefr::Level::B2},
      {"generator_function", cefr::Level::C1}, {"metaclass", cefr::Level::C2}};
  for (const auto& [kind, level] : seeds) {
    const auto got = catalog.classify(kind);
    o.require(got == level, std::string(kind) + " classified as " +
                                (got ? std::string(cefr::to_string(*got)) : "none"));
  }
  if (o.pass) o.detail = "six seeds at A1..C2";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto corpus = load_labeled_corpus(CEFR_CORPUS_DIR);
  std::set<std::string> labeled;
  std::size_t labels = 0, discrepancies = 0;
  std::string first_problem;
  for (const auto& snippet : corpus) {
    for (const auto& [key, count] : snippet.expected) {
      labeled.insert(key.first);
      labels += static_cast<std::size_t>(count);
    }
    const auto problems = corpus_discrepancies(snippet);
    discrepancies += problems.size();
    if (!problems.empty() && first_problem.empty()) first_problem = problems.front();
  }
  o.require(corpus.size() >= 20, std::to_string(corpus.size()) + " snippets, need 20");
  for (auto kind : cefr::kinds::kAll) {
    o.require(labeled.contains(std::string(kind)), "no label for " + std::string(kind));
  }
  o.require(discrepancies == 0,
            std::to_string(discrepancies) + " discrepancies, first: " + first_problem);
  if (o.pass) {
    o.detail = std::to_string(corpus.size()) + " snippets, " + std::to_string(labels) +
               " labels, " + std::to_string(labeled.size()) + " kinds, 0 discrepancies";
  }
  return o;
}

Outcome criterion4(Fixtures& fixtures) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::size_t commits = 0;
  for (const auto& [name, repo] : fixtures.repos) {
    o.require(repo.log().size() <= 30, name + " has more than 30 commits");
    for (bool monthly : {false, true}) {
      const auto oracle = brute_force(repo, cefr::default_catalog(), monthly);
      auto config = config_for(repo, fixtures.dir.path() / "c4", 1);
      config.bot_patterns = {""};
      config.period = monthly ? cefr::Period::Monthly : cefr::Period::Yearly;
      const auto report = cefr::run_analysis(config).report;

      const auto handle = cefr::prepare_repo({repo.path().string(), {}});
      const auto scores = cefr::score_history(
          handle, cefr::extract_commits(handle, {cefr::IdentityMode::Author, false}),
          cefr::default_catalog(), 1);
      o.require(scores.size() == oracle.commits.size(), name + ": commit count differs");
      for (const auto& s : scores) {
        const auto it = oracle.commits.find(s.sha);
        o.require(it != oracle.commits.end(), name + ": unexpected commit " + s.sha);
        if (it == oracle.commits.end()) continue;
        o.require(s.delta == it->second.delta, name + " " + s.sha.substr(0, 8) + ": " +
                                                   str(s.delta) + " vs oracle " +
                                                   str(it->second.delta));
        o.require(s.files_analyzed == it->second.files_analyzed &&
                      s.files_skipped == it->second.files_skipped,
                  name + " " + s.sha.substr(0, 8) + ": file counts differ");
      }
      if (!monthly) commits += scores.size();
      o.require(report.project_total == oracle.total, name + ": project total differs");
      o.require(report.project_by_period == oracle.by_period, name + ": periods differ");
      o.require(report.profiles.size() == oracle.contributors.size(),
                name + ": contributor count differs");
      for (const auto& p : report.profiles) {
        const auto it = oracle.contributors.find(p.contributor.key());
        o.require(it != oracle.contributors.end() && it->second.total == p.total &&
                      it->second.by_period == p.by_period,
                  name + ": contributor " + p.contributor.anon_id + " differs");
      }
    }
  }
  const double elapsed = seconds_since(start);
  o.require(elapsed < 30, "took " + fixed1(elapsed) + " s");
  if (o.pass) {
    o.detail = "3 fixtures, " + std::to_string(commits) + " commits, exact match, " +
               fixed1(elapsed) + " s";
  }
  return o;
}

Outcome criterion5(Fixtures& fixtures) {
  Outcome o;
  for (const auto& [name, repo] : fixtures.repos) {
    auto config = config_for(repo, fixtures.dir.path() / "c5", 1);
    const auto report = cefr::run_analysis(config).report;
    const auto handle = cefr::prepare_repo({repo.path().string(), {}});
    const auto scores = cefr::score_history(
        handle, cefr::extract_commits(handle, {cefr::IdentityMode::Author, false}),
        cefr::default_catalog(), 1);
    LevelVector commit_sum, contributor_sum = report.excluded_total;
    for (const auto& s : scores) commit_sum += s.delta;
    for (const auto& p : report.profiles) contributor_sum += p.total;
    o.require(report.project_total == contributor_sum,
              name + ": total " + str(report.project_total) + " vs contributors " +
                  str(contributor_sum));
    o.require(report.project_total == commit_sum,
              name + ": total " + str(report.project_total) + " vs commits " + str(commit_sum));
    o.detail += (o.detail.empty() ? "" : ", ") + name + " " + str(report.project_total);
  }
  return o;
}

Outcome criterion6(Fixtures& fixtures) {
  Outcome o;
  for (const auto& [name, repo] : fixtures.repos) {
    std::string outputs[2][2];
    int index = 0;
    for (const char* jobs : {"1", "8"}) {
      const auto out = fixtures.dir.path() / ("c6-" + name + "-" + jobs);
      const auto result = cefr::run_process(
          {CEFR_TOOL_PATH, "analyze", repo.path().string(), "--jobs", jobs, "--period", "monthly",
           "--out", out.string()});
      o.require(result.exit_code == 0, name + ": exit " + std::to_string(result.exit_code));
      outputs[index][0] = read_file(out / "report.json");
      outputs[index][1] = read_file(out / "report.csv");
      ++index;
    }
    o.require(!outputs[0][0].empty() && outputs[0][0] == outputs[1][0], name + ": JSON differs");
    o.require(!outputs[0][1].empty() && outputs[0][1] == outputs[1][1], name + ": CSV differs");
  }
  if (o.pass) o.detail = "--jobs 1 and --jobs 8 byte-identical on 3 fixtures";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> count(0, 1000);
  std::size_t dominated = 0;
  for (int i = 0; i < 10000; ++i) {
    LevelVector before, after;
    for (auto level : cefr::kAllLevels) {
      before[level] = count(rng);
      after[level] = i % 5 == 0 ? before[level] - std::min(before[level], count(rng)) : count(rng);
    }
    const auto delta = cefr::commit_delta(before, after);
    bool after_le_before = true;
    for (auto level : cefr::kAllLevels) {
      // Components are unsigned; a negative result would wrap past `after`.
      o.require(delta[level] <= after[level], "component underflow at pair " + std::to_string(i));
      if (after[level] <= before[level]) {
        o.require(delta[level] == 0, "nonzero component where after <= before");
      } else {
        after_le_before = false;
        o.require(delta[level] == after[level] - before[level], "wrong positive component");
      }
    }
    if (after_le_before) {
      ++dominated;
      o.require(delta.is_zero(), "nonzero delta for dominated pair");
    }
  }
  if (o.pass) {
    o.detail = "10000 pairs (" + std::to_string(dominated) + " with after <= before)";
  }
  return o;
}

Outcome criterion8(Fixtures& fixtures) {
  Outcome o;
  for (const auto& [name, repo] : fixtures.repos) {
    const auto out = fixtures.dir.path() / ("c8-" + name);
    const auto result = cefr::run_process(
        {CEFR_TOOL_PATH, "analyze", repo.path().string(), "--show-names", "--out", out.string()});
    o.require(result.exit_code == 0, name + ": exit " + std::to_string(result.exit_code));

    std::istringstream csv(read_file(out / "report.csv"));
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(csv, line)) rows.push_back(line);
    o.require(rows.size() >= 2 && rows.front() == "period,A1,A2,B1,B2,C1,C2",
              name + ": bad CSV header");
    std::array<std::uint64_t, 6> sums{};
    for (std::size_t i = 1; i + 1 < rows.size(); ++i) {
      std::istringstream row(rows[i]);
      std::string cell;
      std::getline(row, cell, ',');
      o.require(cell.size() == 4, name + ": bad period label " + cell);
      for (auto& s : sums) {
        o.require(static_cast<bool>(std::getline(row, cell, ',')), name + ": short CSV row");
        s += std::stoull(cell);
      }
    }
    std::string total = "total";
    for (auto s : sums) total += "," + std::to_string(s);
    o.require(!rows.empty() && rows.back() == total, name + ": total row is not the column sum");

    const auto html = read_file(out / "report.html");
    for (const char* needle : {"http://", "https://", "src=", "href=", "url(", "@import"}) {
      o.require(html.find(needle) == std::string::npos,
                name + ": HTML references '" + std::string(needle) + "'");
    }

    const auto json_text = read_file(out / "report.json");
    const auto parsed = cefr::parse_report_json(json_text);
    o.require(cefr::render_json(parsed, {true, 10}) == json_text, name + ": JSON round trip differs");
    o.require(nlohmann::json::parse(json_text) ==
                  nlohmann::json::parse(cefr::render_json(parsed, {true, 10})),
              name + ": JSON documents differ");
  }
  if (o.pass) o.detail = "CSV layout, self-contained HTML, JSON round trip on 3 fixtures";
  return o;
}

Outcome criterion9(Fixtures& fixtures) {
  Outcome o;
  std::string source;
  std::string label;
  if (const char* repo = std::getenv("CEFR_PERF_REPO"); repo && *repo) {
    source = repo;
    label = source;
  } else {
    const auto path = fixtures.dir.path() / "perf";
    const auto stats = make_synthetic_repo(path, {500, 8, 2024});
    source = path.string();
    label = "generated history (" + std::to_string(stats.commits) + " commits, " +
            std::to_string(stats.python_files) + " files, " + std::to_string(stats.python_lines) +
            " lines at HEAD)";
  }
  const auto out = fixtures.dir.path() / "perf-out";
  const auto start = std::chrono::steady_clock::now();
  const auto result = cefr::run_process({CEFR_TOOL_PATH, "analyze", source, "--out", out.string()},
                                        {}, {std::nullopt, {"CEFR_PROGRESS_CACHE=" + (fixtures.dir.path() / "cache").string()}});
  const double elapsed = seconds_since(start);
  o.require(result.exit_code == 0, "exit " + std::to_string(result.exit_code) + ": " + result.err);
  std::uint64_t commits = 0;
  if (o.pass) {
    commits = nlohmann::json::parse(read_file(out / "report.json"))["stats"]["commits_analyzed"];
  }
  o.require(elapsed < 60, fixed1(elapsed) + " s exceeds 60 s");
  if (o.pass) {
    o.detail = label + ": " + std::to_string(commits) + " commits analyzed in " + fixed1(elapsed) + " s";
  }
  return o;
}

}  // namespace

int main() {
  Fixtures fixtures;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"commit delta of the worked example", criterion1},
      {"default catalog seed levels", criterion2},
      {"hand-labeled corpus", criterion3},
      {"brute-force equivalence", [&] { return criterion4(fixtures); }},
      {"conservation", [&] { return criterion5(fixtures); }},
      {"determinism under parallelism", [&] { return criterion6(fixtures); }},
      {"clamp property", criterion7},
      {"output contracts", [&] { return criterion8(fixtures); }},
      {"desk-scale performance", [&] { return criterion9(fixtures); }},
  };
  int failed = 0;
  int number = 0;
  for (const auto& [title, check] : criteria) {
    ++number;
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    failed += outcome.pass ? 0 : 1;
    std::cout << "criterion " << number << ": " << (outcome.pass ? "PASS" : "FAIL") << " - "
              << title << " (" << outcome.detail << ")" << std::endl;
  }
  return failed;
}
