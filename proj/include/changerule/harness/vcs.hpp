#pragma once

// Version extraction through the git command-line client. Commands run via
// fork/exec with argument vectors; no shell is involved.

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "changerule/harness/manifest.hpp"

namespace changerule::harness {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

class ProcessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs argv[0] (PATH lookup) in `cwd`, capturing stdout and stderr.
inline ProcessResult run_process(const std::vector<std::string>& argv, const std::string& cwd = "") {
  if (argv.empty()) throw ProcessError("empty command");
  int out_pipe[2], err_pipe[2], exec_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0 || pipe2(exec_pipe, O_CLOEXEC) != 0)
    throw ProcessError(std::string("pipe: ") + std::strerror(errno));

  std::vector<char*> args;
  for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = fork();
  if (pid < 0) throw ProcessError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(out_pipe[1], STDOUT_FILENO);
    dup2(err_pipe[1], STDERR_FILENO);
    close(out_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[0]);
    close(err_pipe[1]);
    close(exec_pipe[0]);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    if (!cwd.empty() && chdir(cwd.c_str()) != 0) {
      int e = errno;
      (void)!write(exec_pipe[1], &e, sizeof e);
      _exit(127);
    }
    execvp(args[0], args.data());
    int e = errno;
    (void)!write(exec_pipe[1], &e, sizeof e);
    _exit(127);
  }
  close(out_pipe[1]);
  close(err_pipe[1]);
  close(exec_pipe[1]);

  ProcessResult r;
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  std::string* sinks[2] = {&r.out, &r.err};
  int open_fds = 2;
  char buf[65536];
  while (open_fds > 0) {
    if (poll(fds, 2, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    for (int i = 0; i < 2; ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = read(fds[i].fd, buf, sizeof buf);
      if (n > 0) {
        sinks[i]->append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || errno != EINTR) {
        close(fds[i].fd);
        fds[i].fd = -1;
        --open_fds;
      }
    }
  }
  int exec_errno = 0;
  const bool exec_failed = read(exec_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno;
  close(exec_pipe[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (exec_failed) throw ProcessError("cannot run '" + argv[0] + "': " + std::strerror(exec_errno));
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return r;
}

inline constexpr const char* kGitEnvVar = "CHANGERULE_GIT";

inline std::string default_git_binary() {
  const char* env = std::getenv(kGitEnvVar);
  return env && *env ? env : "git";
}

class GitClient {
 public:
  explicit GitClient(std::string binary = default_git_binary()) : binary_(std::move(binary)) {}

  const std::string& binary() const { return binary_; }

  ProcessResult run(const std::string& repo, std::vector<std::string> args) const {
    args.insert(args.begin(), {binary_, "-C", repo});
    return run_process(args);
  }

  bool has_commit(const std::string& repo, const std::string& rev) const {
    return run(repo, {"rev-parse", "--quiet", "--verify", rev + "^{commit}"}).exit_code == 0;
  }

  bool has_file(const std::string& repo, const std::string& rev, const std::string& path) const {
    return run(repo, {"cat-file", "-e", rev + ":" + path}).exit_code == 0;
  }

  std::optional<std::string> show(const std::string& repo, const std::string& rev, const std::string& path) const {
    auto r = run(repo, {"show", rev + ":" + path});
    if (r.exit_code != 0) return std::nullopt;
    return std::move(r.out);
  }

 private:
  std::string binary_;
};

struct VersionPair {
  std::string misuse_source;  // file at fixing_commit~1
  std::string fix_source;     // file at fixing_commit
};

struct SkipReason {
  std::string reason;
};

/// File contents before and after the fixing commit, or why they are
/// unavailable.
inline std::variant<VersionPair, SkipReason> extract_versions(const GitClient& git, const std::string& repo,
                                                              const ManifestEntry& e) {
  if (!git.has_commit(repo, e.fixing_commit)) return SkipReason{"commit not found"};
  const std::string parent = e.fixing_commit + "~1";
  if (!git.has_commit(repo, parent)) return SkipReason{"no parent commit"};
  if (!git.has_file(repo, parent, e.file_path)) return SkipReason{"absent in parent"};
  if (!git.has_file(repo, e.fixing_commit, e.file_path)) return SkipReason{"absent in fixing commit"};
  auto before = git.show(repo, parent, e.file_path);
  auto after = git.show(repo, e.fixing_commit, e.file_path);
  if (!before || !after) return SkipReason{"cannot read file"};
  return VersionPair{std::move(*before), std::move(*after)};
}

}  // namespace changerule::harness
