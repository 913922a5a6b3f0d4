#include "cefr/pipeline.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "cefr/analyzer.hpp"

namespace cefr {

namespace fs = std::filesystem;

namespace {

struct BlobAnalysis {
  LevelVector vector;
  bool parse_ok = true;
  std::string diagnostic;
};

// Blob id -> analysis. Each blob is usually seen twice (as the after side of
// one commit and the before side of the next), so this halves the parsing.
class AnalysisCache {
 public:
  std::optional<BlobAnalysis> find(const std::string& blob) {
    std::lock_guard lock(mutex_);
    const auto it = entries_.find(blob);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }
  void store(const std::string& blob, const BlobAnalysis& analysis) {
    std::lock_guard lock(mutex_);
    entries_.emplace(blob, analysis);
  }

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, BlobAnalysis> entries_;
};

BlobAnalysis analyze_blob(const std::string& blob, BlobReader& reader, AnalysisCache& cache,
                          const Catalog& catalog) {
  if (blob.empty()) return {};
  if (auto cached = cache.find(blob)) return *cached;
  BlobAnalysis analysis;
  if (const auto text = reader.read_text(blob)) {
    auto result = analyze_source(*text, catalog);
    analysis.vector = result.vector;
    analysis.parse_ok = result.parse_ok;
    analysis.diagnostic = std::move(result.diagnostic);
  }
  cache.store(blob, analysis);
  return analysis;
}

CommitScore score_one(const CommitRecord& record, BlobReader& reader, AnalysisCache& cache,
                      const Catalog& catalog, std::vector<std::string>& diagnostics) {
  CommitScore score{record.sha, record.contributor, record.timestamp, {}, 0, 0};
  for (const auto& change : record.changes) {
    const auto before = analyze_blob(change.before_blob, reader, cache, catalog);
    const auto after = analyze_blob(change.after_blob, reader, cache, catalog);
    if (!before.parse_ok || !after.parse_ok) {
      ++score.files_skipped;
      const auto& failed = before.parse_ok ? after : before;
      const auto& path = before.parse_ok ? change.path : change.old_path;
      diagnostics.push_back(record.sha + " " + path + " (" +
                            (before.parse_ok ? "after" : "before") + "): " + failed.diagnostic);
      continue;
    }
    ++score.files_analyzed;
    score.delta += commit_delta(before.vector, after.vector);
  }
  return score;
}

}  // namespace

std::vector<CommitScore> score_history(const Repository& repo,
                                       const std::vector<CommitRecord>& commits,
                                       const Catalog& catalog, unsigned jobs,
                                       std::vector<std::string>* diagnostics,
                                       const ProgressFn& progress) {
  const std::size_t total = commits.size();
  std::vector<CommitScore> scores(total);
  std::vector<std::vector<std::string>> notes(total);
  AnalysisCache cache;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    try {
      BlobReader reader(repo);
      for (std::size_t i = next++; i < total; i = next++) {
        scores[i] = score_one(commits[i], reader, cache, catalog, notes[i]);
        const std::size_t finished = ++done;
        if (progress) {
          std::lock_guard lock(progress_mutex);
          progress(finished, total);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = total;
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, total)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < workers; ++i) threads.emplace_back(worker);
    for (auto& thread : threads) thread.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (diagnostics) {
    for (auto& list : notes) {
      diagnostics->insert(diagnostics->end(), list.begin(), list.end());
    }
  }
  return scores;
}

RunOutcome run_analysis(const RunConfig& config, const ProgressFn& progress) {
  const Catalog catalog = load_catalog(config.catalog_path);
  const Repository repo = prepare_repo(RepoSpec{config.source, config.cache_dir});
  const auto commits = extract_commits(repo, ExtractOptions{config.identity, false});
  const HeadInfo head = head_info(repo);

  RunOutcome outcome;
  const auto scores =
      score_history(repo, commits, catalog, config.jobs, &outcome.diagnostics, progress);
  outcome.report =
      assemble_report(scores, config.period, config.bot_patterns,
                      ReportMetadata{config.source, head.sha, head.commit_time, catalog.version()});
  return outcome;
}

void write_outputs(const RunConfig& config, const RunOutcome& outcome) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw IoError("cannot create output directory " + config.out_dir.string());
  }
  const EmitOptions options{config.show_names, config.top_n};
  emit_json(outcome.report, config.out_dir / "report.json", options);
  emit_csv(outcome.report, config.out_dir / "report.csv");
  emit_html(outcome.report, config.out_dir / "report.html", options);

  std::ofstream log(config.out_dir / "run.log", std::ios::binary | std::ios::trunc);
  if (!log) throw IoError("cannot write " + (config.out_dir / "run.log").string());
  log << "source " << outcome.report.repo << "\n";
  log << "head " << outcome.report.head_sha << "\n";
  log << "catalog " << outcome.report.catalog_version << "\n";
  log << "commits " << outcome.report.commits_analyzed << "\n";
  log << "files_analyzed " << outcome.report.files_analyzed << "\n";
  log << "files_skipped " << outcome.report.files_skipped << "\n";
  for (const auto& line : outcome.diagnostics) log << "skipped " << line << "\n";
  if (!log) throw IoError("cannot write " + (config.out_dir / "run.log").string());
}

}  // namespace cefr
