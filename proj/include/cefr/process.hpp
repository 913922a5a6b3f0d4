#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <sys/types.h>
#include <utility>
#include <vector>

namespace cefr {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

struct ProcessOptions {
  std::optional<std::filesystem::path> cwd;
  /// Extra NAME=value entries appended to the inherited environment.
  std::vector<std::string> env;
};

/// Runs `argv` (searched on PATH) to completion, feeding `input` on stdin.
/// Throws std::system_error when the program cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          std::string_view input = {},
                          const ProcessOptions& options = {});

/// A long-lived child with pipes on stdin and stdout, for request/response
/// protocols such as `git cat-file --batch`. Not thread-safe; give each
/// thread its own instance.
class ChildProcess {
 public:
  ChildProcess(const std::vector<std::string>& argv, const ProcessOptions& options = {});
  ~ChildProcess();

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  void write(std::string_view data);
  /// Reads through the next '\n' and returns the line without it.
  std::string read_line();
  /// Reads exactly `size` bytes.
  std::string read_exact(std::size_t size);

 private:
  bool fill();

  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
  std::size_t offset_ = 0;
};

}  // namespace cefr
