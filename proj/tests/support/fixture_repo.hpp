#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cefr::testing {

/// A directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& prefix = "cefr-test");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct Author {
  std::string name;
  std::string email;
};

/// What the script did in one commit; the oracle works from this log, not
/// from git's view of the history.
struct ScriptedCommit {
  std::string sha;
  std::vector<std::string> parents;
  Author author;
  std::int64_t time = 0;
  /// old path -> new path for files renamed in this commit.
  std::map<std::string, std::string> renames;
  bool merge = false;
};

/// Builds a git repository commit by commit with fixed identities and
/// dates, so hashes are reproducible.
class FixtureRepo {
 public:
  explicit FixtureRepo(std::filesystem::path dir);

  const std::filesystem::path& path() const { return dir_; }
  const std::vector<ScriptedCommit>& log() const { return log_; }

  void write(const std::string& relative, const std::string& content);
  void remove(const std::string& relative);
  /// git mv; recorded as a rename of the next commit.
  void rename(const std::string& from, const std::string& to);

  /// Commits everything staged or changed; returns the sha.
  std::string commit(const Author& author, std::int64_t time, const std::string& message);

  void checkout(const std::string& ref);
  void checkout_new_branch(const std::string& name);
  /// Merges `branch` into the current branch with a merge commit.
  std::string merge(const std::string& branch, const Author& author, std::int64_t time);

  /// Runs git in the repository and returns stdout; throws on failure.
  std::string git(const std::vector<std::string>& args,
                  const std::vector<std::string>& env = {}) const;

 private:
  std::vector<std::string> identity_env(const Author& author, std::int64_t time) const;
  std::string head() const;

  std::filesystem::path dir_;
  std::vector<ScriptedCommit> log_;
  std::map<std::string, std::string> pending_renames_;
  std::map<std::string, std::string> branch_heads_;
};

/// Seconds since the epoch for a UTC calendar date at noon.
std::int64_t utc(int year, int month, int day);

// The three acceptance fixtures. Each writes a repository into `dir` and
// returns its builder (whose log() drives the brute-force oracle).
FixtureRepo make_linear_fixture(const std::filesystem::path& dir);
FixtureRepo make_merge_fixture(const std::filesystem::path& dir);
FixtureRepo make_rename_fixture(const std::filesystem::path& dir);

}  // namespace cefr::testing
