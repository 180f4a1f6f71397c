#pragma once

// Evaluation driver: corpus loading, size filtering, threshold grid search
// and bucketed cross-validation.

#include <atomic>
#include <cctype>
#include <exception>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "changerule/detector.hpp"
#include "changerule/frontend/aug_builder.hpp"
#include "changerule/frontend/parser.hpp"
#include "changerule/harness/buckets.hpp"
#include "changerule/harness/manifest.hpp"
#include "changerule/harness/vcs.hpp"
#include "json.hpp"

namespace changerule::harness {

inline constexpr std::size_t kDefaultNodeLimit = 100;

/// {1.1, 1.0, ..., 0.1}
inline std::vector<double> default_thresholds() {
  std::vector<double> t;
  for (int i = 11; i >= 1; --i) t.push_back(i / 10.0);
  return t;
}

struct RuleCase {
  std::string id;
  std::string repo;
  ChangeRule rule;
  UsageGraph misuse_aug;
  UsageGraph fix_aug;
};

struct UsageCase {
  std::string id;
  std::string repo;
  /// Entry the usage was taken from; rules never judge usages of their own origin.
  std::string origin;
  UsageGraph graph;
  GroundTruth truth = GroundTruth::Correct;
};

struct SkipRecord {
  std::string manifest;  // "rules" | "usages"
  std::string id;
  std::string reason;
};

struct Attrition {
  std::size_t rule_entries = 0;
  std::size_t rule_versions_extracted = 0;
  std::size_t rule_augs_built = 0;
  std::size_t non_empty_rules = 0;
  std::size_t rules_after_size_filter = 0;
  std::size_t usage_entries = 0;
  std::size_t usage_augs_built = 0;
  std::size_t usages_after_size_filter = 0;
};

struct Corpus {
  std::vector<RuleCase> rules;
  std::vector<UsageCase> usages;
  std::vector<SkipRecord> skipped;
  Attrition attrition;
};

// ---------------------------------------------------------------------------
// Size filter

/// Drops rules whose misuse AUG, fix AUG or either rule side has at least
/// `limit` nodes, and usages with at least `limit` nodes.
inline void size_filter(std::vector<RuleCase>& rules, std::vector<UsageCase>& usages, std::size_t limit,
                        std::vector<SkipRecord>* skipped = nullptr) {
  if (limit == 0) throw std::invalid_argument("node limit must be positive");
  auto too_big = [limit](const UsageGraph& g) { return g.node_count() >= limit; };
  std::vector<RuleCase> kept_rules;
  for (auto& r : rules) {
    if (too_big(r.misuse_aug) || too_big(r.fix_aug) || too_big(r.rule.misuse) || too_big(r.rule.fix)) {
      if (skipped) skipped->push_back({"rules", r.id, "size limit"});
      continue;
    }
    kept_rules.push_back(std::move(r));
  }
  std::vector<UsageCase> kept_usages;
  for (auto& u : usages) {
    if (too_big(u.graph)) {
      if (skipped) skipped->push_back({"usages", u.id, "size limit"});
      continue;
    }
    kept_usages.push_back(std::move(u));
  }
  rules = std::move(kept_rules);
  usages = std::move(kept_usages);
}

// ---------------------------------------------------------------------------
// Corpus loading

namespace detail {

inline std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

class RepoResolver {
 public:
  RepoResolver(const GitClient& git, std::string cache_dir) : git_(git), cache_(std::move(cache_dir)) {}

  /// Local directory for a repository URI, cloning remote URIs on first use.
  std::variant<std::string, SkipReason> resolve(const std::string& uri) {
    if (auto it = done_.find(uri); it != done_.end()) return it->second;
    std::variant<std::string, SkipReason> result;
    if (std::filesystem::is_directory(uri)) {
      result = uri;
    } else if (cache_.empty()) {
      result = SkipReason{"repository not found"};
    } else {
      const std::string dir = (std::filesystem::path(cache_) / sanitize(uri)).string();
      if (!std::filesystem::is_directory(dir)) {
        std::filesystem::create_directories(cache_);
        auto r = run_process({git_.binary(), "clone", "--quiet", uri, dir});
        if (r.exit_code != 0) {
          result = SkipReason{"clone failed"};
          done_.emplace(uri, result);
          return result;
        }
      }
      result = dir;
    }
    done_.emplace(uri, result);
    return result;
  }

 private:
  const GitClient& git_;
  std::string cache_;
  std::map<std::string, std::variant<std::string, SkipReason>> done_;
};

inline std::variant<UsageGraph, SkipReason> build_version(const std::string& source, const std::string& method,
                                                          const char* version) {
  try {
    return frontend::build_aug(frontend::parse(source), method);
  } catch (const frontend::MethodNotFound&) {
    return SkipReason{std::string("method not found in ") + version};
  } catch (const frontend::SyntaxError& e) {
    return SkipReason{std::string("parse error in ") + version + ": " + e.what()};
  } catch (const GraphError& e) {
    return SkipReason{std::string("graph error in ") + version + ": " + e.what()};
  }
}

}  // namespace detail

struct LoadOptions {
  std::size_t node_limit = kDefaultNodeLimit;
  /// Where remote repositories are cloned; empty disables cloning.
  std::string clone_dir;
};

inline Corpus load_corpus(const std::vector<ManifestEntry>& rule_entries,
                          const std::vector<ManifestEntry>& usage_entries, const GitClient& git,
                          const LoadOptions& opts = {}) {
  Corpus c;
  detail::RepoResolver repos(git, opts.clone_dir);
  c.attrition.rule_entries = rule_entries.size();
  c.attrition.usage_entries = usage_entries.size();

  for (const ManifestEntry& e : rule_entries) {
    auto skip = [&](std::string reason) { c.skipped.push_back({"rules", e.id(), std::move(reason)}); };
    auto dir = repos.resolve(e.repo_uri);
    if (auto* s = std::get_if<SkipReason>(&dir)) {
      skip(s->reason);
      continue;
    }
    auto versions = extract_versions(git, std::get<std::string>(dir), e);
    if (auto* s = std::get_if<SkipReason>(&versions)) {
      skip(s->reason);
      continue;
    }
    ++c.attrition.rule_versions_extracted;
    const auto& v = std::get<VersionPair>(versions);
    auto m = detail::build_version(v.misuse_source, e.method_decl, "parent");
    if (auto* s = std::get_if<SkipReason>(&m)) {
      skip(s->reason);
      continue;
    }
    auto f = detail::build_version(v.fix_source, e.method_decl, "fixing commit");
    if (auto* s = std::get_if<SkipReason>(&f)) {
      skip(s->reason);
      continue;
    }
    ++c.attrition.rule_augs_built;
    RuleCase rc{e.id(), e.repo_uri, {}, std::move(std::get<UsageGraph>(m)), std::move(std::get<UsageGraph>(f))};
    rc.rule = build_change_rule(rc.misuse_aug, rc.fix_aug, {e.id(), e.fixing_commit});
    if (rc.rule.empty()) {
      skip("empty rule");
      continue;
    }
    ++c.attrition.non_empty_rules;
    c.rules.push_back(std::move(rc));
  }

  for (const ManifestEntry& e : usage_entries) {
    auto skip = [&](std::string reason) { c.skipped.push_back({"usages", e.id(), std::move(reason)}); };
    if (!e.label) {
      skip("missing label");
      continue;
    }
    auto dir = repos.resolve(e.repo_uri);
    if (auto* s = std::get_if<SkipReason>(&dir)) {
      skip(s->reason);
      continue;
    }
    const std::string& repo = std::get<std::string>(dir);
    if (!git.has_commit(repo, e.fixing_commit)) {
      skip("commit not found");
      continue;
    }
    auto text = git.show(repo, e.fixing_commit, e.file_path);
    if (!text) {
      skip("absent in commit");
      continue;
    }
    auto g = detail::build_version(*text, e.method_decl, "commit");
    if (auto* s = std::get_if<SkipReason>(&g)) {
      skip(s->reason);
      continue;
    }
    ++c.attrition.usage_augs_built;
    c.usages.push_back({e.id(), e.repo_uri, e.id(), std::move(std::get<UsageGraph>(g)), *e.label});
  }

  size_filter(c.rules, c.usages, opts.node_limit, &c.skipped);
  c.attrition.rules_after_size_filter = c.rules.size();
  c.attrition.usages_after_size_filter = c.usages.size();
  return c;
}

// ---------------------------------------------------------------------------
// Grid search

struct ReportCell {
  std::string function;
  double threshold = 0.0;
  /// Mean precision over rules with at least one positive; unset if none.
  std::optional<double> relative_precision_mean;
  /// Mean precision over all rules, positive-free rules counting as 0.
  double conservative_precision_mean = 0.0;
  double recall_mean = 0.0;
  double applicable_rule_count = 0.0;
  double absolute_tp_mean = 0.0;
  std::size_t rule_count = 0;
};

struct AggregateReport {
  /// Function-major, thresholds in the given order.
  std::vector<ReportCell> cells;

  const ReportCell* find(const std::string& fn, double threshold) const {
    for (const auto& c : cells)
      if (c.function == fn && std::fabs(c.threshold - threshold) < 1e-9) return &c;
    return nullptr;
  }
};

struct GridOptions {
  std::vector<DistanceConfig> cfgs = all_distance_configs();
  std::vector<double> thresholds = default_thresholds();
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// outcomes[rule][cfg][threshold]
using OutcomeGrid = std::vector<std::vector<std::vector<EvalOutcome>>>;

/// Rules and usages with their profiles computed once.
struct PreparedCorpus {
  struct Rule {
    std::string id;
    std::string repo;
    PreparedRule profile;
  };
  struct Usage {
    std::string id;
    std::string repo;
    std::string origin;
    GroundTruth truth;
    GraphProfile profile;
    bool derived = false;  // misuse/fix AUG of a rule entry
  };
  std::vector<Rule> rules;
  std::vector<Usage> usages;
};

namespace detail {

template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
  if (workers == 0) workers = std::max(1U, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Usage pool: explicit usages followed by the misuse (labeled misuse) and
/// fix (labeled correct) AUGs of every rule entry.
inline PreparedCorpus prepare(const std::vector<RuleCase>& rules, const std::vector<UsageCase>& usages,
                              unsigned workers = 0) {
  PreparedCorpus p;
  p.rules.resize(rules.size());
  p.usages.resize(usages.size() + 2 * rules.size());
  detail::parallel_for(rules.size(), workers, [&](std::size_t i) {
    const RuleCase& r = rules[i];
    p.rules[i] = {r.id, r.repo, PreparedRule(r.rule)};
    p.usages[usages.size() + 2 * i] = {r.id + "#misuse", r.repo, r.id, GroundTruth::Misuse, GraphProfile(r.misuse_aug), true};
    p.usages[usages.size() + 2 * i + 1] = {r.id + "#fix", r.repo, r.id, GroundTruth::Correct, GraphProfile(r.fix_aug), true};
  });
  detail::parallel_for(usages.size(), workers, [&](std::size_t i) {
    const UsageCase& u = usages[i];
    p.usages[i] = {u.id, u.repo, u.origin, u.truth, GraphProfile(u.graph)};
  });
  return p;
}

/// Evaluates the given rules against the given usages for every cfg and
/// threshold. Each distance is computed once per (rule, usage, cfg).
inline OutcomeGrid evaluate_grid(const PreparedCorpus& p, const std::vector<std::size_t>& rule_idx,
                                 const std::vector<std::size_t>& usage_idx, const GridOptions& opts) {
  OutcomeGrid grid(rule_idx.size(), std::vector<std::vector<EvalOutcome>>(
                                        opts.cfgs.size(), std::vector<EvalOutcome>(opts.thresholds.size())));
  detail::parallel_for(rule_idx.size(), opts.workers, [&](std::size_t k) {
    const auto& rule = p.rules[rule_idx[k]];
    for (std::size_t ui : usage_idx) {
      const auto& usage = p.usages[ui];
      if (usage.origin == rule.id) continue;
      for (std::size_t c = 0; c < opts.cfgs.size(); ++c) {
        const double d_rm = distance(rule.profile.misuse, usage.profile, opts.cfgs[c]);
        const double d_rc = distance(rule.profile.fix, usage.profile, opts.cfgs[c]);
        for (std::size_t t = 0; t < opts.thresholds.size(); ++t)
          record(grid[k][c][t], decide(d_rm, d_rc, opts.thresholds[t]), usage.truth);
      }
    }
  });
  return grid;
}

/// Cell statistics from per-rule outcomes.
inline ReportCell aggregate(const std::vector<EvalOutcome>& per_rule) {
  ReportCell cell;
  cell.rule_count = per_rule.size();
  double precision_sum = 0.0, recall_sum = 0.0;
  std::size_t with_positives = 0, applicable = 0;
  long tp = 0;
  for (const EvalOutcome& o : per_rule) {
    const RuleMetrics m = rule_metrics(o);
    if (m.precision) {
      precision_sum += *m.precision;
      ++with_positives;
    }
    recall_sum += m.recall;
    if (o.total() > 0) ++applicable;
    tp += o.tp;
  }
  if (with_positives > 0) cell.relative_precision_mean = precision_sum / static_cast<double>(with_positives);
  if (!per_rule.empty()) {
    cell.conservative_precision_mean = precision_sum / static_cast<double>(per_rule.size());
    cell.recall_mean = recall_sum / static_cast<double>(per_rule.size());
  }
  cell.applicable_rule_count = static_cast<double>(applicable);
  cell.absolute_tp_mean = static_cast<double>(tp);
  return cell;
}

inline AggregateReport summarize(const OutcomeGrid& grid, const GridOptions& opts) {
  AggregateReport report;
  for (std::size_t c = 0; c < opts.cfgs.size(); ++c) {
    for (std::size_t t = 0; t < opts.thresholds.size(); ++t) {
      std::vector<EvalOutcome> column;
      column.reserve(grid.size());
      for (const auto& rule : grid) column.push_back(rule[c][t]);
      ReportCell cell = aggregate(column);
      cell.function = opts.cfgs[c].name();
      cell.threshold = opts.thresholds[t];
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

/// Every rule against every usage of the pool except its own origin.
inline AggregateReport grid_search(const PreparedCorpus& p, const GridOptions& opts = {}) {
  std::vector<std::size_t> ri(p.rules.size()), ui(p.usages.size());
  for (std::size_t i = 0; i < ri.size(); ++i) ri[i] = i;
  for (std::size_t i = 0; i < ui.size(); ++i) ui[i] = i;
  return summarize(evaluate_grid(p, ri, ui, opts), opts);
}

inline AggregateReport grid_search(const std::vector<RuleCase>& rules, const std::vector<UsageCase>& usages,
                                   const GridOptions& opts = {}) {
  return grid_search(prepare(rules, usages, opts.workers), opts);
}

// ---------------------------------------------------------------------------
// Cross-validation

struct CrossValidation {
  BucketAssignment buckets;
  /// Per fold; unset for skipped folds.
  std::vector<std::optional<AggregateReport>> folds;
  AggregateReport overall;
  std::vector<std::string> warnings;
};

/// Mean over reports with identical cell layout.
inline AggregateReport mean_report(const std::vector<const AggregateReport*>& reports) {
  AggregateReport out;
  if (reports.empty()) return out;
  out = *reports.front();
  const double n = static_cast<double>(reports.size());
  for (std::size_t i = 0; i < out.cells.size(); ++i) {
    ReportCell& cell = out.cells[i];
    double rel = 0.0, cons = 0.0, rec = 0.0, app = 0.0, tp = 0.0;
    std::size_t rel_n = 0, rules = 0;
    for (const AggregateReport* r : reports) {
      const ReportCell& c = r->cells[i];
      if (c.relative_precision_mean) {
        rel += *c.relative_precision_mean;
        ++rel_n;
      }
      cons += c.conservative_precision_mean;
      rec += c.recall_mean;
      app += c.applicable_rule_count;
      tp += c.absolute_tp_mean;
      rules += c.rule_count;
    }
    cell.relative_precision_mean = rel_n ? std::optional<double>(rel / static_cast<double>(rel_n)) : std::nullopt;
    cell.conservative_precision_mean = cons / n;
    cell.recall_mean = rec / n;
    cell.applicable_rule_count = app / n;
    cell.absolute_tp_mean = tp / n;
    cell.rule_count = rules;
  }
  return out;
}

/// Buckets all entries (rules and labeled usages) by repository; in fold f,
/// rules outside bucket f judge the usages inside it.
inline CrossValidation cross_validate(const PreparedCorpus& p, std::size_t k, const GridOptions& opts = {}) {
  std::map<std::string, std::size_t> per_repo;
  for (const auto& r : p.rules) ++per_repo[r.repo];
  for (const auto& u : p.usages)
    if (!u.derived) ++per_repo[u.repo];
  CrossValidation cv;
  cv.buckets = bucket_assign(per_repo, k);
  std::vector<const AggregateReport*> done;
  cv.folds.resize(k);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> ri, ui;
    for (std::size_t i = 0; i < p.rules.size(); ++i)
      if (cv.buckets.bucket_of_repo.at(p.rules[i].repo) != f) ri.push_back(i);
    for (std::size_t i = 0; i < p.usages.size(); ++i)
      if (cv.buckets.bucket_of_repo.at(p.usages[i].repo) == f) ui.push_back(i);
    if (ui.empty() || ri.empty()) {
      cv.warnings.push_back("fold " + std::to_string(f + 1) + " skipped: " +
                            (ui.empty() ? "no held-out usages" : "no rules outside the held-out bucket"));
      continue;
    }
    cv.folds[f] = summarize(evaluate_grid(p, ri, ui, opts), opts);
  }
  for (const auto& r : cv.folds)
    if (r) done.push_back(&*r);
  cv.overall = mean_report(done);
  return cv;
}

// ---------------------------------------------------------------------------
// Report output

inline std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline std::string report_tsv(const std::vector<std::pair<std::string, const AggregateReport*>>& sections) {
  std::ostringstream os;
  os << "fold\tfunction\tthreshold\trelative_precision_mean\tconservative_precision_mean\trecall_mean\t"
        "applicable_rule_count\tabsolute_tp_mean\trule_count\n";
  for (const auto& [fold, report] : sections) {
    for (const ReportCell& c : report->cells) {
      os << fold << '\t' << c.function << '\t' << format_number(c.threshold) << '\t'
         << (c.relative_precision_mean ? format_number(*c.relative_precision_mean) : "NA") << '\t'
         << format_number(c.conservative_precision_mean) << '\t' << format_number(c.recall_mean) << '\t'
         << format_number(c.applicable_rule_count) << '\t' << format_number(c.absolute_tp_mean) << '\t'
         << c.rule_count << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json report_json(const AggregateReport& r) {
  nlohmann::json cells = nlohmann::json::array();
  for (const ReportCell& c : r.cells) {
    cells.push_back({{"function", c.function},
                     {"threshold", c.threshold},
                     {"relative_precision_mean",
                      c.relative_precision_mean ? nlohmann::json(*c.relative_precision_mean) : nlohmann::json()},
                     {"conservative_precision_mean", c.conservative_precision_mean},
                     {"recall_mean", c.recall_mean},
                     {"applicable_rule_count", c.applicable_rule_count},
                     {"absolute_tp_mean", c.absolute_tp_mean},
                     {"rule_count", c.rule_count}});
  }
  return cells;
}

inline nlohmann::json attrition_json(const Attrition& a) {
  return {{"rule_entries", a.rule_entries},
          {"rule_versions_extracted", a.rule_versions_extracted},
          {"rule_augs_built", a.rule_augs_built},
          {"non_empty_rules", a.non_empty_rules},
          {"rules_after_size_filter", a.rules_after_size_filter},
          {"usage_entries", a.usage_entries},
          {"usage_augs_built", a.usage_augs_built},
          {"usages_after_size_filter", a.usages_after_size_filter}};
}

inline std::string skipped_tsv(const std::vector<SkipRecord>& skipped) {
  std::ostringstream os;
  os << "manifest\tentry\treason\n";
  for (const auto& s : skipped) os << s.manifest << '\t' << s.id << '\t' << s.reason << '\n';
  return os.str();
}

}  // namespace changerule::harness
