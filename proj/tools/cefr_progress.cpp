// cefr-progress: mine a Python repository's history and report how the
// proficiency level of the code each contributor adds evolves over time.
//
// Exit codes: 0 ok, 1 usage, 2 repository, 3 catalog, 4 I/O, 5 parse failure.
#include <fstream>
#include <iostream>
#include <memory>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cefr/analyzer.hpp"
#include "cefr/catalog.hpp"
#include "cefr/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kRepo = 2, kCatalog = 3, kIo = 4, kParse = 5 };

int cmd_analyze(const cefr::RunConfig& config) {
  for (const auto& pattern : config.bot_patterns) {
    try {
      std::regex check(pattern);
    } catch (const std::regex_error& e) {
      std::cerr << "error: invalid --bot-pattern '" << pattern << "': " << e.what() << "\n";
      return kUsage;
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec || !std::filesystem::is_directory(config.out_dir)) {
    std::cerr << "error: cannot create output directory " << config.out_dir.string() << "\n";
    return kIo;
  }
  try {
    auto last_reported = std::make_shared<std::size_t>(0);
    const auto progress = [last_reported](std::size_t done, std::size_t total) {
      if (done == total || done - *last_reported >= 100) {
        std::cerr << "\rscored " << done << "/" << total << " commits" << (done == total ? "\n" : "")
                  << std::flush;
        *last_reported = done;
      }
    };
    std::cerr << "mining " << config.source << "\n";
    const auto outcome = cefr::run_analysis(config, progress);
    cefr::write_outputs(config, outcome);
    const auto& report = outcome.report;
    std::cout << "analyzed " << report.commits_analyzed << " commits, " << report.files_skipped
              << " files skipped, top contributor "
              << (report.top_contributor
                      ? cefr::display_name(report.top_contributor->contributor, config.show_names)
                      : std::string("none"))
              << "; reports in " << config.out_dir.string() << "\n";
    return kOk;
  } catch (const cefr::RepoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRepo;
  } catch (const cefr::CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCatalog;
  } catch (const cefr::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
}

int cmd_classify(const std::string& file, const std::optional<std::filesystem::path>& catalog_path) {
  cefr::Catalog catalog;
  try {
    catalog = cefr::load_catalog(catalog_path);
  } catch (const cefr::CatalogError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCatalog;
  }
  std::ifstream in(file, std::ios::binary);
  if (!in || std::filesystem::is_directory(file)) {
    std::cerr << "error: cannot read " << file << "\n";
    return kIo;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const auto result = cefr::analyze_source(buffer.str(), catalog);
  if (!result.parse_ok) {
    std::cerr << "error: " << file << ": " << result.diagnostic << "\n";
    return kParse;
  }
  nlohmann::json occurrences = nlohmann::json::array();
  for (const auto& o : result.occurrences) {
    const auto level = catalog.classify(o.kind);
    occurrences.push_back({{"kind", o.kind},
                           {"line", o.line},
                           {"level", level ? nlohmann::json(cefr::to_string(*level))
                                           : nlohmann::json(nullptr)}});
  }
  nlohmann::json vector = nlohmann::json::object();
  for (auto level : cefr::kAllLevels) vector[std::string(cefr::to_string(level))] = result.vector[level];
  const nlohmann::json document = {{"file", file},
                                   {"catalog_version", catalog.version()},
                                   {"vector", vector},
                                   {"total", result.vector.total()},
                                   {"unclassified", result.unclassified_count},
                                   {"occurrences", occurrences}};
  std::cout << document.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine a Python git repository and report CEFR-level code proficiency."};
  app.require_subcommand(1);

  cefr::RunConfig config;
  config.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> bot_patterns;
  std::string identity = "author";
  std::string period = "yearly";
  std::string catalog_file;

  auto* analyze = app.add_subcommand("analyze", "Analyze the full history of a repository");
  analyze->add_option("repo", config.source, "Local repository path or clone URL")->required();
  analyze->add_option("--out", config.out_dir, "Output directory")->capture_default_str();
  analyze->add_option("--period", period, "Bucket size")
      ->check(CLI::IsMember({"monthly", "yearly"}))
      ->capture_default_str();
  analyze->add_option("--catalog", catalog_file, "Catalog file overriding the defaults");
  analyze->add_option("--top", config.top_n, "Contributor charts in the HTML report")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_flag("--show-names", config.show_names, "Show real names instead of anonymized ids");
  analyze->add_option("--bot-pattern", bot_patterns,
                      "Regex on author names to exclude from contributor reports (repeatable; "
                      "replaces the default \\[bot\\]$, an empty pattern disables filtering)");
  analyze->add_option("--identity", identity, "Which git identity is the contributor")
      ->check(CLI::IsMember({"author", "committer"}))
      ->capture_default_str();
  analyze->add_option("--jobs", config.jobs, "Parallel scoring workers")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string classify_file;
  auto* classify = app.add_subcommand("classify", "Print the constructs found in one Python file");
  classify->add_option("file", classify_file, "Python source file")->required();
  classify->add_option("--catalog", catalog_file, "Catalog file overriding the defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  std::optional<std::filesystem::path> catalog_path;
  if (!catalog_file.empty()) catalog_path = catalog_file;

  if (*classify) return cmd_classify(classify_file, catalog_path);

  config.period = period == "monthly" ? cefr::Period::Monthly : cefr::Period::Yearly;
  config.identity =
      identity == "committer" ? cefr::IdentityMode::Committer : cefr::IdentityMode::Author;
  config.catalog_path = catalog_path;
  if (analyze->count("--bot-pattern") > 0) config.bot_patterns = bot_patterns;
  return cmd_analyze(config);
}
