#pragma once

// Distance functions over Exas vectors.
//
// dist = lambda * feature_dist + (1 - lambda) * feature_count_dist, where
// feature_dist measures feature-set overlap and feature_count_dist compares
// the counts of the shared features (L1, cosine, or collapsed to 0/1 for the
// indicator variants). Split variants compare per-package sub-graphs.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "changerule/exas.hpp"
#include "changerule/graph.hpp"

namespace changerule {

enum class Norm : std::uint8_t { L1, Cosine, IndicatorCollapsed };

struct DistanceConfig {
  Norm norm = Norm::IndicatorCollapsed;
  bool api_only = false;
  bool split = false;
  double lambda = 0.5;

  bool indicator() const { return norm == Norm::IndicatorCollapsed; }

  std::string name() const {
    std::string s = api_only ? "API" : "";
    s += indicator() ? "IndicatorExasVector" : "ExasVector";
    if (split) s += "Split";
    if (norm == Norm::L1) s += "L1Norm";
    if (norm == Norm::Cosine) s += "Cosine";
    return s;
  }

  void check() const {
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0,1)");
  }

  friend bool operator==(const DistanceConfig&, const DistanceConfig&) = default;
};

/// The twelve named variants, in a fixed order.
inline std::vector<DistanceConfig> all_distance_configs(double lambda = 0.5) {
  std::vector<DistanceConfig> out;
  for (bool api : {false, true})
    for (bool split : {false, true})
      for (Norm n : {Norm::L1, Norm::Cosine}) out.push_back({n, api, split, lambda});
  for (bool api : {false, true})
    for (bool split : {false, true}) out.push_back({Norm::IndicatorCollapsed, api, split, lambda});
  return out;
}

inline std::optional<DistanceConfig> find_distance_config(std::string_view name, double lambda = 0.5) {
  for (const DistanceConfig& c : all_distance_configs(lambda))
    if (c.name() == name) return c;
  return std::nullopt;
}

inline DistanceConfig distance_config(std::string_view name, double lambda = 0.5) {
  if (auto c = find_distance_config(name, lambda)) return *c;
  throw std::invalid_argument("unknown distance function '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Terms

/// Counts of the shared features (the cut of both feature sets), aligned.
struct SubVectorPair {
  std::vector<long> tilde_a;
  std::vector<long> tilde_b;

  std::size_t size() const { return tilde_a.size(); }
};

inline SubVectorPair shared_subvectors(const ExasVector& a, const ExasVector& b) {
  SubVectorPair out;
  auto ia = a.entries().begin(), ea = a.entries().end();
  auto ib = b.entries().begin(), eb = b.entries().end();
  while (ia != ea && ib != eb) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      out.tilde_a.push_back(ia->second.count);
      out.tilde_b.push_back(ib->second.count);
      ++ia;
      ++ib;
    }
  }
  return out;
}

inline double feature_dist(std::size_t shared, std::size_t len_a, std::size_t len_b) {
  if (len_a == 0 && len_b == 0) return 0.0;
  if (len_a == 0 || len_b == 0) return 1.0;
  const double s = static_cast<double>(shared);
  return 1.0 - std::max(s / static_cast<double>(len_b), s / static_cast<double>(len_a));
}

inline double feature_dist(const ExasVector& a, const ExasVector& b) {
  return feature_dist(shared_subvectors(a, b).size(), a.size(), b.size());
}

inline double feature_count_l1(const SubVectorPair& p) {
  if (p.size() == 0) return 1.0;
  long max_val = 0;
  for (std::size_t i = 0; i < p.size(); ++i) max_val = std::max(max_val, std::labs(p.tilde_a[i] - p.tilde_b[i]));
  const double scale = static_cast<double>(std::max(1L, max_val));
  double l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) l1 += static_cast<double>(std::labs(p.tilde_a[i] - p.tilde_b[i])) / scale;
  return std::clamp(l1 / static_cast<double>(p.size()), 0.0, 1.0);
}

inline double feature_count_cosine(const SubVectorPair& p) {
  if (p.size() == 0) return 1.0;
  __int128 dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += static_cast<__int128>(p.tilde_a[i]) * p.tilde_b[i];
    na += static_cast<__int128>(p.tilde_a[i]) * p.tilde_a[i];
    nb += static_cast<__int128>(p.tilde_b[i]) * p.tilde_b[i];
  }
  if (na == 0 || nb == 0) return 1.0;
  if (dot * dot == na * nb) return 0.0;
  const double cos = static_cast<double>(dot) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
  return std::clamp(1.0 - cos, 0.0, 1.0);
}

/// Weighted sum of the set and count terms on vectors that already carry the config's API filter and
/// indicator transform.
inline double combined_vector_dist(const ExasVector& a, const ExasVector& b, const DistanceConfig& cfg) {
  if (a.empty() && b.empty()) return 0.0;
  const SubVectorPair shared = shared_subvectors(a, b);
  const double fd = feature_dist(shared.size(), a.size(), b.size());
  double fc = 1.0;
  switch (cfg.norm) {
    case Norm::L1: fc = feature_count_l1(shared); break;
    case Norm::Cosine: fc = feature_count_cosine(shared); break;
    case Norm::IndicatorCollapsed: fc = shared.size() > 0 ? 0.0 : 1.0; break;
  }
  return std::clamp(cfg.lambda * fd + (1.0 - cfg.lambda) * fc, 0.0, 1.0);
}

/// Mean over the sub-distances that are not 1; 1 when all are; 0 when there
/// are none.
inline double aggregate_split(const std::vector<double>& sub) {
  constexpr double kEps = 1e-12;
  if (sub.empty()) return 0.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (double d : sub) {
    if (std::fabs(d - 1.0) <= kEps) continue;
    sum += d;
    ++n;
  }
  return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Graph profiles: all transformed vectors of one graph, computed once.

class GraphProfile {
 public:
  GraphProfile() = default;
  explicit GraphProfile(const UsageGraph& g) {
    fill(whole_, vectorize(g));
    for (const auto& [group, sub] : split_graph(g)) {
      std::array<ExasVector, 4> v;
      fill(v, vectorize(sub));
      groups_.emplace(group, std::move(v));
    }
  }

  const ExasVector& whole(const DistanceConfig& cfg) const { return whole_[slot(cfg)]; }

  /// Non-empty group vectors for the config's transform.
  std::map<std::string, const ExasVector*> groups(const DistanceConfig& cfg) const {
    std::map<std::string, const ExasVector*> out;
    for (const auto& [group, v] : groups_)
      if (!v[slot(cfg)].empty()) out.emplace(group, &v[slot(cfg)]);
    return out;
  }

 private:
  static std::size_t slot(const DistanceConfig& cfg) { return (cfg.api_only ? 2 : 0) + (cfg.indicator() ? 1 : 0); }

  static void fill(std::array<ExasVector, 4>& slots, ExasVector raw) {
    slots[2] = raw.api_only();
    slots[3] = slots[2].indicator();
    slots[1] = raw.indicator();
    slots[0] = std::move(raw);
  }

  std::array<ExasVector, 4> whole_;
  std::map<std::string, std::array<ExasVector, 4>> groups_;
};

inline double split_dist(const GraphProfile& a, const GraphProfile& b, const DistanceConfig& cfg) {
  const auto ga = a.groups(cfg);
  const auto gb = b.groups(cfg);
  std::vector<double> sub;
  auto ia = ga.begin();
  auto ib = gb.begin();
  while (ia != ga.end() || ib != gb.end()) {
    if (ib == gb.end() || (ia != ga.end() && ia->first < ib->first)) {
      sub.push_back(1.0);
      ++ia;
    } else if (ia == ga.end() || ib->first < ia->first) {
      sub.push_back(1.0);
      ++ib;
    } else {
      sub.push_back(combined_vector_dist(*ia->second, *ib->second, cfg));
      ++ia;
      ++ib;
    }
  }
  return aggregate_split(sub);
}

inline double distance(const GraphProfile& a, const GraphProfile& b, const DistanceConfig& cfg) {
  if (cfg.split) return split_dist(a, b, cfg);
  return combined_vector_dist(a.whole(cfg), b.whole(cfg), cfg);
}

inline double combined_dist(const UsageGraph& a, const UsageGraph& b, const DistanceConfig& cfg) {
  DistanceConfig whole = cfg;
  whole.split = false;
  return distance(GraphProfile(a), GraphProfile(b), whole);
}

inline double split_dist(const UsageGraph& a, const UsageGraph& b, const DistanceConfig& cfg) {
  return split_dist(GraphProfile(a), GraphProfile(b), cfg);
}

inline double distance(const UsageGraph& a, const UsageGraph& b, const DistanceConfig& cfg) {
  return distance(GraphProfile(a), GraphProfile(b), cfg);
}

}  // namespace changerule
