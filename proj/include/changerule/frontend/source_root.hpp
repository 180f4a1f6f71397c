#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace changerule::frontend {

class SourceRootMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strips "<package as directories>/<file>" from a source file path, e.g.
/// ("/home/foo/de/bar/File.java", "de.bar") -> "/home/foo/". The result
/// keeps its trailing separator; a bare file name yields "".
inline std::string infer_source_root(std::string_view file_path, std::string_view package_name) {
  auto slash = file_path.rfind('/');
  std::string_view dir = slash == std::string_view::npos ? std::string_view{} : file_path.substr(0, slash);

  std::vector<std::string_view> segments;
  for (std::size_t start = 0; start < package_name.size();) {
    auto dot = package_name.find('.', start);
    if (dot == std::string_view::npos) dot = package_name.size();
    segments.push_back(package_name.substr(start, dot - start));
    start = dot + 1;
  }

  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    auto cut = dir.rfind('/');
    std::string_view last = cut == std::string_view::npos ? dir : dir.substr(cut + 1);
    if (it->empty() || last != *it)
      throw SourceRootMismatch("package '" + std::string(package_name) + "' does not match path '" +
                               std::string(file_path) + "'");
    dir = cut == std::string_view::npos ? std::string_view{} : dir.substr(0, cut);
  }
  if (slash == std::string_view::npos) return {};
  if (segments.empty()) return std::string(file_path.substr(0, slash + 1));
  return std::string(dir) + "/";
}

}  // namespace changerule::frontend
