#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cefr {

class RepoError : public std::runtime_error {
 public:
  enum class Reason { CloneFailed, Shallow, Empty, BadSha, NotFound, Git };

  RepoError(Reason reason, const std::string& message)
      : std::runtime_error(message), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

std::string_view to_string(RepoError::Reason reason);

struct RepoSpec {
  /// A local repository path or a clone URL.
  std::string source;
  /// Clone cache directory; empty means cache_directory().
  std::filesystem::path workdir;
};

/// CEFR_PROGRESS_CACHE if set, else $XDG_CACHE_HOME/cefr-progress, else
/// ~/.cache/cefr-progress.
std::filesystem::path cache_directory();

/// A prepared local repository (working tree or bare).
struct Repository {
  std::filesystem::path path;
  /// The source string the repository was prepared from.
  std::string source;
  bool from_cache = false;
};

/// Uses local paths in place. URLs are cloned (bare, full history) into the
/// cache under a digest of the URL and reused on later calls.
Repository prepare_repo(const RepoSpec& spec);

struct ContributorId {
  std::string raw_name;
  std::string raw_email;
  std::string anon_id;

  /// Lowercased, trimmed email; two ids are the same contributor when
  /// their keys match.
  std::string key() const;

  static ContributorId from(std::string name, std::string email);
};

enum class ChangeType { Added, Modified, Deleted, Renamed };

std::string_view to_string(ChangeType type);

struct FileChange {
  std::string path;
  /// Source path of a rename; equals path otherwise.
  std::string old_path;
  ChangeType change_type = ChangeType::Modified;
  /// Blob ids; empty when the side does not exist.
  std::string before_blob;
  std::string after_blob;
  std::optional<std::string> before_text;
  std::optional<std::string> after_text;
};

struct CommitRecord {
  std::string sha;
  std::optional<std::string> parent_sha;
  ContributorId contributor;
  /// Author time, UTC seconds.
  std::int64_t timestamp = 0;
  std::vector<FileChange> changes;
};

enum class IdentityMode { Author, Committer };

struct ExtractOptions {
  IdentityMode identity = IdentityMode::Author;
  /// When false only blob ids are filled; texts are loaded later with a
  /// BlobReader.
  bool load_texts = true;
};

/// Every non-merge commit reachable from HEAD, oldest first, parents
/// before children and otherwise by commit time. Each record lists its
/// changed .py files against its single parent.
std::vector<CommitRecord> extract_commits(const Repository& repo,
                                          const ExtractOptions& options = {});

/// Commits grouped by contributor key. Each list keeps input order; the
/// ContributorId key of each group is the first identity seen.
std::map<std::string, std::vector<CommitRecord>> group_by_contributor(
    const std::vector<CommitRecord>& commits);

/// The file at `path` in commit `sha`, or nothing when the path is absent
/// there or the blob is binary. Throws RepoError(BadSha).
std::optional<std::string> get_version(const Repository& repo, const std::string& path,
                                       const std::string& sha);

struct HeadInfo {
  std::string sha;
  std::int64_t commit_time = 0;
};

HeadInfo head_info(const Repository& repo);

/// A blob is binary when it contains a NUL byte.
bool is_binary(std::string_view data);

/// Reads objects through one persistent `git cat-file --batch` process.
/// Each thread needs its own reader.
class BlobReader {
 public:
  explicit BlobReader(const Repository& repo);
  ~BlobReader();
  BlobReader(const BlobReader&) = delete;
  BlobReader& operator=(const BlobReader&) = delete;

  /// Object content by id or "rev:path"; nothing when missing or not a blob.
  std::optional<std::string> read(const std::string& object);

  /// Text of a blob, or nothing for missing or binary blobs.
  std::optional<std::string> read_text(const std::string& object);

  /// Fills before_text / after_text of every change from the blob ids.
  void load_texts(CommitRecord& record);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cefr
