#pragma once

// Repository-preserving bucket assignment for cross-validation.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace changerule::harness {

struct BucketAssignment {
  std::size_t buckets = 0;
  std::size_t capacity = 0;
  /// Bucket index (0-based) per repository.
  std::map<std::string, std::size_t> bucket_of_repo;
  std::vector<std::size_t> sizes;
};

/// `entries_per_repo`: repo -> entry count. Repositories are visited by
/// descending size (ties by name); each goes whole into the next bucket in
/// cyclic order with room for it, else into the bucket with the most room.
inline BucketAssignment bucket_assign(const std::map<std::string, std::size_t>& entries_per_repo, std::size_t k) {
  if (k < 2) throw std::invalid_argument("bucket count must be at least 2");
  std::size_t total = 0;
  std::vector<std::pair<std::string, std::size_t>> repos(entries_per_repo.begin(), entries_per_repo.end());
  for (const auto& r : repos) total += r.second;
  std::stable_sort(repos.begin(), repos.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  BucketAssignment out;
  out.buckets = k;
  out.capacity = (total + k - 1) / k;
  out.sizes.assign(k, 0);
  std::size_t cursor = 0;
  for (const auto& [repo, n] : repos) {
    std::optional<std::size_t> pick;
    for (std::size_t step = 0; step < k; ++step) {
      const std::size_t b = (cursor + step) % k;
      if (out.sizes[b] + n <= out.capacity) {
        pick = b;
        break;
      }
    }
    if (pick) {
      cursor = (*pick + 1) % k;
    } else {
      pick = static_cast<std::size_t>(std::min_element(out.sizes.begin(), out.sizes.end()) - out.sizes.begin());
    }
    out.bucket_of_repo[repo] = *pick;
    out.sizes[*pick] += n;
  }
  return out;
}

}  // namespace changerule::harness
