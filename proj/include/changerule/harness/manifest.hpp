#pragma once

// Tab-separated manifests: repo_uri, fixing_commit, file_path, method_decl
// and, for usage manifests, a label column (misuse | correct).
// Blank lines and lines starting with '#' are ignored; a first row whose
// first field is "repo_uri" is treated as a header.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "changerule/detector.hpp"

namespace changerule::harness {

class ManifestError : public std::runtime_error {
 public:
  ManifestError(const std::string& source, std::size_t line, const std::string& message)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + message) {}
};

struct ManifestEntry {
  std::string repo_uri;
  std::string fixing_commit;
  std::string file_path;
  std::string method_decl;
  std::optional<GroundTruth> label;

  /// Stable identifier used for origin matching and reports.
  std::string id() const { return repo_uri + "@" + fixing_commit + ":" + file_path + "#" + method_decl; }
};

inline std::optional<GroundTruth> parse_label(std::string_view s) {
  if (s == "misuse") return GroundTruth::Misuse;
  if (s == "correct") return GroundTruth::Correct;
  return std::nullopt;
}

inline std::string_view to_string(GroundTruth t) { return t == GroundTruth::Misuse ? "misuse" : "correct"; }

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace detail

/// `require_label`: usage manifests must carry a label column.
inline std::vector<ManifestEntry> parse_manifest(std::istream& in, bool require_label,
                                                 const std::string& source = "<manifest>") {
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto f = detail::split_tabs(line);
    if (first && f.front() == "repo_uri") {
      first = false;
      continue;
    }
    first = false;
    if (f.size() < 4 || f.size() > 5) throw ManifestError(source, line_no, "expected 4 or 5 tab-separated columns");
    for (std::size_t i = 0; i < 4; ++i)
      if (f[i].empty()) throw ManifestError(source, line_no, "empty field in column " + std::to_string(i + 1));
    ManifestEntry e{f[0], f[1], f[2], f[3], std::nullopt};
    if (f.size() == 5) {
      e.label = parse_label(f[4]);
      if (!e.label) throw ManifestError(source, line_no, "label must be 'misuse' or 'correct'");
    } else if (require_label) {
      throw ManifestError(source, line_no, "missing label column");
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<ManifestEntry> parse_manifest_text(const std::string& text, bool require_label) {
  std::istringstream in(text);
  return parse_manifest(in, require_label);
}

inline std::vector<ManifestEntry> load_manifest(const std::string& path, bool require_label) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  return parse_manifest(in, require_label, path);
}

}  // namespace changerule::harness
