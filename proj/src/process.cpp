#include "cefr/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <csignal>
#include <mutex>
#include <stdexcept>
#include <system_error>

extern char** environ;

namespace cefr {

namespace {

[[noreturn]] void throw_errno(const std::string& what, int code = errno) {
  throw std::system_error(code, std::generic_category(), what);
}

// A child that exits early must surface as a read error, not kill us.
void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

struct Pipe {
  int fds[2] = {-1, -1};
  Pipe() {
    if (::pipe2(fds, O_CLOEXEC) != 0) throw_errno("pipe");
  }
  ~Pipe() {
    close_read();
    close_write();
  }
  void close_read() {
    if (fds[0] >= 0) ::close(fds[0]);
    fds[0] = -1;
  }
  void close_write() {
    if (fds[1] >= 0) ::close(fds[1]);
    fds[1] = -1;
  }
  int release_read() { return std::exchange(fds[0], -1); }
  int release_write() { return std::exchange(fds[1], -1); }
};

class Environment {
 public:
  explicit Environment(const std::vector<std::string>& extra) {
    for (char** e = environ; *e; ++e) storage_.emplace_back(*e);
    storage_.insert(storage_.end(), extra.begin(), extra.end());
    for (auto& entry : storage_) pointers_.push_back(entry.data());
    pointers_.push_back(nullptr);
  }
  char** get() { return pointers_.data(); }

 private:
  std::vector<std::string> storage_;
  std::vector<char*> pointers_;
};

pid_t spawn(const std::vector<std::string>& argv, const ProcessOptions& options,
            int stdin_fd, int stdout_fd, int stderr_fd) {
  if (argv.empty()) throw std::invalid_argument("empty argv");
  ignore_sigpipe();
  std::vector<std::string> args(argv);
  std::vector<char*> arg_pointers;
  for (auto& a : args) arg_pointers.push_back(a.data());
  arg_pointers.push_back(nullptr);
  Environment env(options.env);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, stdin_fd, STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, stdout_fd, STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, stderr_fd, STDERR_FILENO);
  if (options.cwd) {
    posix_spawn_file_actions_addchdir_np(&actions, options.cwd->c_str());
  }
  pid_t pid = -1;
  const int rc =
      posix_spawnp(&pid, args[0].c_str(), &actions, nullptr, arg_pointers.data(), env.get());
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) throw_errno("cannot start " + args[0], rc);
  return pid;
}

int wait_for(pid_t pid) {
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw_errno("waitpid");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + WTERMSIG(status);
}

void set_nonblocking(int fd) {
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
}

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input,
                          const ProcessOptions& options) {
  Pipe in, out, err;
  const pid_t pid = spawn(argv, options, in.fds[0], out.fds[1], err.fds[1]);
  in.close_read();
  out.close_write();
  err.close_write();
  if (input.empty()) in.close_write();

  ProcessResult result;
  std::size_t written = 0;
  std::array<char, 65536> chunk{};
  if (in.fds[1] >= 0) set_nonblocking(in.fds[1]);
  while (out.fds[0] >= 0 || err.fds[0] >= 0) {
    std::array<pollfd, 3> fds{};
    nfds_t count = 0;
    auto watch = [&](int fd, short events) {
      if (fd >= 0) fds[count++] = pollfd{fd, events, 0};
    };
    watch(out.fds[0], POLLIN);
    watch(err.fds[0], POLLIN);
    watch(in.fds[1], POLLOUT);
    if (::poll(fds.data(), count, -1) < 0) {
      if (errno == EINTR) continue;
      throw_errno("poll");
    }
    for (nfds_t i = 0; i < count; ++i) {
      if (fds[i].revents == 0) continue;
      const int fd = fds[i].fd;
      if (fd == in.fds[1]) {
        const ssize_t n = ::write(fd, input.data() + written, input.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if (n < 0 && errno != EAGAIN && errno != EINTR) written = input.size();
        if (written == input.size()) in.close_write();
        continue;
      }
      const ssize_t n = ::read(fd, chunk.data(), chunk.size());
      if (n > 0) {
        (fd == out.fds[0] ? result.out : result.err).append(chunk.data(), static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        if (fd == out.fds[0]) {
          out.close_read();
        } else {
          err.close_read();
        }
      }
    }
  }
  in.close_write();
  result.exit_code = wait_for(pid);
  return result;
}

ChildProcess::ChildProcess(const std::vector<std::string>& argv, const ProcessOptions& options) {
  Pipe in, out;
  const int devnull = ::open("/dev/null", O_WRONLY | O_CLOEXEC);
  if (devnull < 0) throw_errno("/dev/null");
  try {
    pid_ = spawn(argv, options, in.fds[0], out.fds[1], devnull);
  } catch (...) {
    ::close(devnull);
    throw;
  }
  ::close(devnull);
  to_child_ = in.release_write();
  from_child_ = out.release_read();
}

ChildProcess::~ChildProcess() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    try {
      wait_for(pid_);
    } catch (...) {
    }
  }
}

void ChildProcess::write(std::string_view data) {
  while (!data.empty()) {
    const ssize_t n = ::write(to_child_, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("write to child");
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

bool ChildProcess::fill() {
  buffer_.erase(0, offset_);
  offset_ = 0;
  std::array<char, 65536> chunk{};
  while (true) {
    const ssize_t n = ::read(from_child_, chunk.data(), chunk.size());
    if (n > 0) {
      buffer_.append(chunk.data(), static_cast<std::size_t>(n));
      return true;
    }
    if (n == 0) return false;
    if (errno != EINTR) throw_errno("read from child");
  }
}

std::string ChildProcess::read_line() {
  while (true) {
    const auto newline = buffer_.find('\n', offset_);
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(offset_, newline - offset_);
      offset_ = newline + 1;
      return line;
    }
    if (!fill()) throw std::runtime_error("child process closed its output");
  }
}

std::string ChildProcess::read_exact(std::size_t size) {
  while (buffer_.size() - offset_ < size) {
    if (!fill()) throw std::runtime_error("child process closed its output");
  }
  std::string data = buffer_.substr(offset_, size);
  offset_ += size;
  return data;
}

}  // namespace cefr
