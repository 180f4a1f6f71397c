#pragma once

// Rule application: applicability (d_rm < threshold) and misuse decision
// (d_rm < d_rc), plus per-rule outcome tallies.

#include <optional>
#include <stdexcept>

#include "changerule/distance.hpp"
#include "changerule/rule_inference.hpp"

namespace changerule {

inline constexpr double kDefaultThreshold = 1.1;

struct Verdict {
  bool applicable = false;
  bool is_misuse = false;
  double d_rm = 0.0;
  double d_rc = 0.0;
};

enum class GroundTruth : std::uint8_t { Misuse, Correct };

struct EvalOutcome {
  long tp = 0;
  long fp = 0;
  long tn = 0;
  long fn = 0;

  long total() const { return tp + fp + tn + fn; }
  long positives() const { return tp + fp; }

  EvalOutcome& operator+=(const EvalOutcome& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
  }
  friend bool operator==(const EvalOutcome&, const EvalOutcome&) = default;
};

struct RuleMetrics {
  std::optional<double> precision;
  double recall = 0.0;
};

/// Both rule sides profiled once.
struct PreparedRule {
  GraphProfile misuse;
  GraphProfile fix;

  PreparedRule() = default;
  explicit PreparedRule(const ChangeRule& r) : misuse(r.misuse), fix(r.fix) {}
};

inline void check_threshold(double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
}

/// Verdict from precomputed distances.
inline Verdict decide(double d_rm, double d_rc, double threshold) {
  Verdict v;
  v.d_rm = d_rm;
  v.d_rc = d_rc;
  v.applicable = d_rm < threshold;
  v.is_misuse = v.applicable && d_rm < d_rc;
  return v;
}

inline Verdict detect(const PreparedRule& rule, const GraphProfile& usage, const DistanceConfig& cfg,
                      double threshold = kDefaultThreshold) {
  check_threshold(threshold);
  return decide(distance(rule.misuse, usage, cfg), distance(rule.fix, usage, cfg), threshold);
}

inline Verdict detect(const ChangeRule& rule, const UsageGraph& usage, const DistanceConfig& cfg,
                      double threshold = kDefaultThreshold) {
  return detect(PreparedRule(rule), GraphProfile(usage), cfg, threshold);
}

inline bool is_applicable(const ChangeRule& rule, const UsageGraph& usage, const DistanceConfig& cfg,
                          double threshold) {
  check_threshold(threshold);
  return distance(rule.misuse, usage, cfg) < threshold;
}

/// Adds one verdict to the tally; non-applicable verdicts are ignored.
inline void record(EvalOutcome& o, const Verdict& v, GroundTruth truth) {
  if (!v.applicable) return;
  if (truth == GroundTruth::Misuse) {
    ++(v.is_misuse ? o.tp : o.fn);
  } else {
    ++(v.is_misuse ? o.fp : o.tn);
  }
}

inline void classify(EvalOutcome& o, const ChangeRule& rule, const UsageGraph& usage, GroundTruth truth,
                     const DistanceConfig& cfg, double threshold) {
  record(o, detect(rule, usage, cfg, threshold), truth);
}

inline RuleMetrics rule_metrics(const EvalOutcome& o) {
  RuleMetrics m;
  if (o.tp + o.fp > 0) m.precision = static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fp);
  if (o.tp + o.fn > 0) m.recall = static_cast<double>(o.tp) / static_cast<double>(o.tp + o.fn);
  return m;
}

}  // namespace changerule
