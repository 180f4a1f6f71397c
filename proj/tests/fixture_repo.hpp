#pragma once

// Scripted git repositories for harness tests.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "changerule/harness/vcs.hpp"

namespace fixture {

namespace fs = std::filesystem;

inline fs::path temp_dir(const std::string& stem) {
  fs::path base = fs::temp_directory_path() / ("changerule-" + stem + "-" + std::to_string(::getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  return base;
}

class Repo {
 public:
  explicit Repo(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
    git({"init", "--quiet"});
  }

  const fs::path& dir() const { return dir_; }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = dir_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
  }

  void remove(const std::string& rel) { git({"rm", "--quiet", rel}); }

  /// Commits everything; returns the commit hash.
  std::string commit(const std::string& message) {
    git({"add", "-A"});
    git({"-c", "user.name=fixture", "-c", "user.email=fixture@example.org", "commit", "--quiet",
         "--allow-empty", "-m", message});
    auto r = git({"rev-parse", "HEAD"});
    std::string h = r.out;
    while (!h.empty() && (h.back() == '\n' || h.back() == '\r')) h.pop_back();
    return h;
  }

 private:
  changerule::harness::ProcessResult git(std::vector<std::string> args) {
    args.insert(args.begin(), {"git", "-C", dir_.string()});
    auto r = changerule::harness::run_process(args);
    if (r.exit_code != 0) throw std::runtime_error("git failed: " + r.err);
    return r;
  }

  fs::path dir_;
};

}  // namespace fixture
