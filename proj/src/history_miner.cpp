#include "cefr/history_miner.hpp"

#include <cstdlib>
#include <regex>
#include <unistd.h>

#include "cefr/digest.hpp"
#include "cefr/process.hpp"

namespace cefr {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kGitEnv = {"GIT_TERMINAL_PROMPT=0", "LC_ALL=C"};

std::vector<std::string> git_args(const fs::path& repo, std::initializer_list<std::string> args) {
  std::vector<std::string> argv = {"git", "-C", repo.string(), "-c", "log.showSignature=false"};
  argv.insert(argv.end(), args.begin(), args.end());
  return argv;
}

ProcessResult git(const fs::path& repo, std::initializer_list<std::string> args) {
  return run_process(git_args(repo, args), {}, ProcessOptions{std::nullopt, kGitEnv});
}

std::string trim(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) {
    text.pop_back();
  }
  return text;
}

bool looks_like_url(const std::string& source) {
  static const std::regex scp_like(R"(^[A-Za-z0-9._-]+@[A-Za-z0-9._-]+:.+)");
  return source.find("://") != std::string::npos || std::regex_match(source, scp_like);
}

bool is_git_repository(const fs::path& path) {
  return git(path, {"rev-parse", "--git-dir"}).exit_code == 0;
}

void require_full_history(const fs::path& path) {
  const auto result = git(path, {"rev-parse", "--is-shallow-repository"});
  if (trim(result.out) == "true") {
    throw RepoError(RepoError::Reason::Shallow,
                    path.string() + " is a shallow clone; full history is required");
  }
}

bool is_python_path(std::string_view path) { return path.ends_with(".py"); }

// Regular files only: symlinks and submodules carry no Python source.
bool is_regular_mode(std::string_view mode) { return mode.starts_with("100"); }

bool is_null_oid(std::string_view oid) { return oid.find_first_not_of('0') == std::string_view::npos; }

class LogReader {
 public:
  explicit LogReader(std::string_view data) : data_(data) {}

  bool done() const { return pos_ >= data_.size(); }
  char peek() const { return data_[pos_]; }
  void skip() { ++pos_; }

  std::string_view until(char terminator) {
    const auto end = data_.find(terminator, pos_);
    const auto stop = end == std::string_view::npos ? data_.size() : end;
    const auto field = data_.substr(pos_, stop - pos_);
    pos_ = end == std::string_view::npos ? data_.size() : end + 1;
    return field;
  }

  // The last header field ends at a newline before the raw diff, or at a
  // NUL when the commit has no changes.
  std::string_view until_either(char a, char b) {
    std::size_t end = pos_;
    while (end < data_.size() && data_[end] != a && data_[end] != b) ++end;
    const auto field = data_.substr(pos_, end - pos_);
    pos_ = end < data_.size() ? end + 1 : end;
    return field;
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::optional<FileChange> make_change(std::string_view meta, std::string old_path,
                                      std::string new_path) {
  // meta: ":<old mode> <new mode> <old oid> <new oid> <status>"
  std::vector<std::string_view> parts;
  std::size_t start = 1;
  while (start <= meta.size()) {
    const auto space = meta.find(' ', start);
    const auto stop = space == std::string_view::npos ? meta.size() : space;
    parts.push_back(meta.substr(start, stop - start));
    start = stop + 1;
  }
  if (parts.size() < 5) throw RepoError(RepoError::Reason::Git, "unexpected git log output");
  const char status = parts[4].empty() ? 'M' : parts[4][0];
  const bool renamed = status == 'R' || status == 'C';
  if (!renamed) old_path = new_path;

  const bool before = is_python_path(old_path) && is_regular_mode(parts[0]) &&
                      !is_null_oid(parts[2]) && status != 'C';
  const bool after = is_python_path(new_path) && is_regular_mode(parts[1]) && !is_null_oid(parts[3]);
  if (!before && !after) return std::nullopt;

  FileChange change;
  if (before && after) {
    change.path = new_path;
    change.old_path = old_path;
    change.change_type = old_path == new_path ? ChangeType::Modified : ChangeType::Renamed;
  } else if (after) {
    change.path = change.old_path = new_path;
    change.change_type = ChangeType::Added;
  } else {
    change.path = change.old_path = old_path;
    change.change_type = ChangeType::Deleted;
  }
  if (before) change.before_blob = std::string(parts[2]);
  if (after) change.after_blob = std::string(parts[3]);
  return change;
}

std::vector<CommitRecord> parse_log(std::string_view output, IdentityMode identity) {
  std::vector<CommitRecord> commits;
  LogReader reader(output);
  while (!reader.done()) {
    const char c = reader.peek();
    if (c == '\x01') {
      reader.skip();
      CommitRecord record;
      record.sha = std::string(reader.until('\0'));
      const auto parents = reader.until('\0');
      if (!parents.empty()) record.parent_sha = std::string(parents.substr(0, parents.find(' ')));
      std::string author_name(reader.until('\0'));
      std::string author_email(reader.until('\0'));
      record.timestamp = std::strtoll(std::string(reader.until('\0')).c_str(), nullptr, 10);
      std::string committer_name(reader.until('\0'));
      std::string committer_email(reader.until('\0'));
      reader.until_either('\n', '\0');
      record.contributor = identity == IdentityMode::Author
                               ? ContributorId::from(std::move(author_name), std::move(author_email))
                               : ContributorId::from(std::move(committer_name),
                                                     std::move(committer_email));
      commits.push_back(std::move(record));
    } else if (c == ':') {
      if (commits.empty()) throw RepoError(RepoError::Reason::Git, "unexpected git log output");
      const auto meta = reader.until('\0');
      const char status = meta.substr(meta.rfind(' ') + 1).front();
      const bool two_paths = status == 'R' || status == 'C';
      std::string first(reader.until('\0'));
      std::string second = two_paths ? std::string(reader.until('\0')) : first;
      if (auto change = make_change(meta, std::move(first), std::move(second))) {
        commits.back().changes.push_back(std::move(*change));
      }
    } else {
      reader.skip();
    }
  }
  return commits;
}

}  // namespace

std::string_view to_string(RepoError::Reason reason) {
  switch (reason) {
    case RepoError::Reason::CloneFailed: return "clone_failed";
    case RepoError::Reason::Shallow: return "shallow";
    case RepoError::Reason::Empty: return "empty";
    case RepoError::Reason::BadSha: return "bad_sha";
    case RepoError::Reason::NotFound: return "not_found";
    case RepoError::Reason::Git: return "git";
  }
  return "unknown";
}

std::string_view to_string(ChangeType type) {
  switch (type) {
    case ChangeType::Added: return "added";
    case ChangeType::Modified: return "modified";
    case ChangeType::Deleted: return "deleted";
    case ChangeType::Renamed: return "renamed";
  }
  return "unknown";
}

std::string ContributorId::key() const { return normalize_email(raw_email); }

ContributorId ContributorId::from(std::string name, std::string email) {
  ContributorId id;
  id.anon_id = anonymize_email(email);
  id.raw_name = std::move(name);
  id.raw_email = std::move(email);
  return id;
}

fs::path cache_directory() {
  if (const char* dir = std::getenv("CEFR_PROGRESS_CACHE"); dir && *dir) return dir;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg) {
    return fs::path(xdg) / "cefr-progress";
  }
  if (const char* home = std::getenv("HOME"); home && *home) {
    return fs::path(home) / ".cache" / "cefr-progress";
  }
  return fs::temp_directory_path() / "cefr-progress";
}

Repository prepare_repo(const RepoSpec& spec) {
  std::error_code ec;
  if (fs::exists(spec.source, ec)) {
    const fs::path path = fs::absolute(spec.source);
    if (!is_git_repository(path)) {
      throw RepoError(RepoError::Reason::NotFound, spec.source + " is not a git repository");
    }
    require_full_history(path);
    return Repository{path, spec.source, false};
  }
  if (!looks_like_url(spec.source)) {
    throw RepoError(RepoError::Reason::NotFound, spec.source + " does not exist");
  }

  const fs::path cache = spec.workdir.empty() ? cache_directory() : spec.workdir;
  const fs::path target = cache / (sha256_hex(spec.source).substr(0, 16) + ".git");
  if (fs::exists(target, ec) && is_git_repository(target)) {
    require_full_history(target);
    return Repository{target, spec.source, true};
  }
  fs::create_directories(cache, ec);
  if (ec) {
    throw RepoError(RepoError::Reason::CloneFailed,
                    "cannot create cache directory " + cache.string() + ": " + ec.message());
  }
  const fs::path staging = target.string() + ".tmp-" + std::to_string(::getpid());
  fs::remove_all(staging, ec);
  const auto result =
      run_process({"git", "clone", "--bare", "--quiet", "--", spec.source, staging.string()}, {},
                  ProcessOptions{std::nullopt, kGitEnv});
  if (result.exit_code != 0) {
    fs::remove_all(staging, ec);
    throw RepoError(RepoError::Reason::CloneFailed,
                    "cannot clone " + spec.source + ": " + trim(result.err));
  }
  fs::remove_all(target, ec);
  fs::rename(staging, target, ec);
  if (ec) {
    fs::remove_all(staging, ec);
    throw RepoError(RepoError::Reason::CloneFailed, "cannot move clone into " + target.string());
  }
  require_full_history(target);
  return Repository{target, spec.source, false};
}

std::vector<CommitRecord> extract_commits(const Repository& repo, const ExtractOptions& options) {
  if (git(repo.path, {"rev-parse", "--verify", "-q", "HEAD^{commit}"}).exit_code != 0) {
    throw RepoError(RepoError::Reason::Empty, repo.source + " has no commits");
  }
  const auto result = git(repo.path, {"log", "-z", "--no-merges", "--date-order", "--reverse",
                                      "--root", "-M", "--raw", "--no-abbrev", "--no-color",
                                      "--format=format:%x01%H%x00%P%x00%an%x00%ae%x00%at%x00%cn%"
                                      "x00%ce%x00%ct",
                                      "HEAD", "--"});
  if (result.exit_code != 0) {
    throw RepoError(RepoError::Reason::Git, "git log failed: " + trim(result.err));
  }
  auto commits = parse_log(result.out, options.identity);
  if (options.load_texts) {
    BlobReader reader(repo);
    for (auto& record : commits) reader.load_texts(record);
  }
  return commits;
}

std::map<std::string, std::vector<CommitRecord>> group_by_contributor(
    const std::vector<CommitRecord>& commits) {
  std::map<std::string, std::vector<CommitRecord>> groups;
  for (const auto& commit : commits) groups[commit.contributor.key()].push_back(commit);
  return groups;
}

std::optional<std::string> get_version(const Repository& repo, const std::string& path,
                                       const std::string& sha) {
  const auto verified = git(repo.path, {"rev-parse", "--verify", "-q", sha + "^{commit}"});
  if (verified.exit_code != 0) {
    throw RepoError(RepoError::Reason::BadSha, "unknown commit " + sha);
  }
  BlobReader reader(repo);
  return reader.read_text(trim(verified.out) + ":" + path);
}

HeadInfo head_info(const Repository& repo) {
  const auto result = git(repo.path, {"log", "-1", "--format=%H %ct", "HEAD"});
  if (result.exit_code != 0) {
    throw RepoError(RepoError::Reason::Empty, repo.source + " has no commits");
  }
  const auto line = trim(result.out);
  const auto space = line.find(' ');
  return HeadInfo{line.substr(0, space), std::strtoll(line.c_str() + space + 1, nullptr, 10)};
}

bool is_binary(std::string_view data) { return data.find('\0') != std::string_view::npos; }

struct BlobReader::Impl {
  ChildProcess process;
  explicit Impl(const Repository& repo)
      : process(git_args(repo.path, {"cat-file", "--batch"}), ProcessOptions{std::nullopt, kGitEnv}) {}
};

BlobReader::BlobReader(const Repository& repo) : impl_(std::make_unique<Impl>(repo)) {}

BlobReader::~BlobReader() = default;

std::optional<std::string> BlobReader::read(const std::string& object) {
  if (object.find('\n') != std::string::npos) return std::nullopt;
  impl_->process.write(object + "\n");
  const std::string header = impl_->process.read_line();
  // "<oid> <type> <size>" or "<name> missing" / "<name> ambiguous"
  const auto last = header.rfind(' ');
  const auto middle = last == std::string::npos ? std::string::npos : header.rfind(' ', last - 1);
  if (middle == std::string::npos) return std::nullopt;
  const std::string type = header.substr(middle + 1, last - middle - 1);
  const std::string size_text = header.substr(last + 1);
  if (size_text.empty() || size_text.find_first_not_of("0123456789") != std::string::npos) {
    return std::nullopt;
  }
  const auto size = static_cast<std::size_t>(std::stoull(size_text));
  std::string content = impl_->process.read_exact(size + 1);
  content.pop_back();
  if (type != "blob") return std::nullopt;
  return content;
}

std::optional<std::string> BlobReader::read_text(const std::string& object) {
  auto content = read(object);
  if (content && is_binary(*content)) return std::nullopt;
  return content;
}

void BlobReader::load_texts(CommitRecord& record) {
  for (auto& change : record.changes) {
    if (!change.before_blob.empty()) change.before_text = read_text(change.before_blob);
    if (!change.after_blob.empty()) change.after_text = read_text(change.after_blob);
  }
}

}  // namespace cefr
