#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "changerule/changerule.hpp"

namespace cr = changerule;
namespace hv = changerule::harness;

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_vector(const cr::ExasVector& v) {
  for (const auto& [key, entry] : v.entries())
    std::cout << cr::to_string(key) << '\t' << entry.count << (entry.api ? "\tapi" : "") << '\n';
}

cr::ExasVector transform(cr::ExasVector v, bool api_only, bool indicator) {
  if (api_only) v = cr::filter_api_features(v);
  if (indicator) v = cr::to_indicator(v);
  return v;
}

std::vector<cr::DistanceConfig> parse_fns(const std::string& spec, double lambda) {
  if (spec == "all") return cr::all_distance_configs(lambda);
  std::vector<cr::DistanceConfig> out;
  for (const auto& name : split_list(spec)) out.push_back(cr::distance_config(name, lambda));
  return out;
}

std::vector<double> parse_thresholds(const std::string& spec) {
  if (spec.empty()) return hv::default_thresholds();
  std::vector<double> out;
  for (const auto& t : split_list(spec)) out.push_back(std::stod(t));
  return out;
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Change-rule inference and API misuse detection"};
  app.require_subcommand(1);

  // build-aug
  auto* build = app.add_subcommand("build-aug", "Build the usage graph of one method of a Java source file");
  std::string build_file, build_method, build_out;
  build->add_option("file", build_file, "Java source file")->required()->check(CLI::ExistingFile);
  build->add_option("--method", build_method, "Method name, Class.name or name(Type, ...)")->required();
  build->add_option("--out", build_out, "Output graph file (default: stdout)");

  // infer-rule
  auto* infer = app.add_subcommand("infer-rule", "Infer a change rule from a misuse graph and its fix");
  std::string infer_m, infer_c, infer_out, infer_id, infer_commit;
  infer->add_option("--misuse", infer_m, "Misuse graph file")->required()->check(CLI::ExistingFile);
  infer->add_option("--fix", infer_c, "Fix graph file")->required()->check(CLI::ExistingFile);
  infer->add_option("--out", infer_out, "Output rule file")->required();
  infer->add_option("--origin", infer_id, "Origin identifier recorded in the rule");
  infer->add_option("--commit", infer_commit, "Fixing commit recorded in the rule");

  // vectorize
  auto* vec = app.add_subcommand("vectorize", "Print the Exas features of a graph");
  std::string vec_file;
  bool vec_api = false, vec_ind = false, vec_split = false;
  vec->add_option("graph", vec_file, "Graph file")->required()->check(CLI::ExistingFile);
  vec->add_flag("--api-only", vec_api, "Keep API features only");
  vec->add_flag("--indicator", vec_ind, "Replace counts by 1");
  vec->add_flag("--split", vec_split, "One vector per API package group");

  // distance
  auto* dist = app.add_subcommand("distance", "Distance between two graphs");
  std::string dist_a, dist_b, dist_fn;
  double lambda = 0.5;
  dist->add_option("graph_a", dist_a)->required()->check(CLI::ExistingFile);
  dist->add_option("graph_b", dist_b)->required()->check(CLI::ExistingFile);
  dist->add_option("--fn", dist_fn, "Distance function name")->required();
  dist->add_option("--lambda", lambda, "Weight of the feature-set term")->check(CLI::Range(0.0, 0.999999));

  // detect
  auto* det = app.add_subcommand("detect", "Apply a rule to a usage graph");
  std::string det_rule, det_usage, det_fn = "IndicatorExasVector";
  double det_threshold = cr::kDefaultThreshold;
  det->add_option("--rule", det_rule, "Rule file")->required()->check(CLI::ExistingFile);
  det->add_option("--usage", det_usage, "Usage graph file")->required()->check(CLI::ExistingFile);
  det->add_option("--fn", det_fn, "Distance function name")->capture_default_str();
  det->add_option("--threshold", det_threshold, "Applicability threshold")->capture_default_str();
  det->add_option("--lambda", lambda, "Weight of the feature-set term")->check(CLI::Range(0.0, 0.999999));

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Run the detection experiment over manifests");
  std::string ev_rules, ev_usages, ev_fns = "all", ev_thresholds, ev_out, ev_git = hv::default_git_binary(),
                                   ev_clone_dir;
  std::size_t ev_limit = hv::kDefaultNodeLimit, ev_folds = 10;
  unsigned ev_workers = 0;
  ev->add_option("--rules", ev_rules, "Rule manifest (TSV)")->required()->check(CLI::ExistingFile);
  ev->add_option("--usages", ev_usages, "Labeled usage manifest (TSV)")->check(CLI::ExistingFile);
  ev->add_option("--fns", ev_fns, "Comma-separated distance functions or 'all'")->capture_default_str();
  ev->add_option("--thresholds", ev_thresholds, "Comma-separated thresholds (default 1.1,1.0,...,0.1)");
  ev->add_option("--node-limit", ev_limit, "Drop graphs with at least this many nodes")->capture_default_str();
  ev->add_option("--folds", ev_folds, "Cross-validation buckets; 0 or 1 evaluates all rules on all usages")
      ->capture_default_str();
  ev->add_option("--out", ev_out, "Output directory")->required();
  ev->add_option("--git", ev_git, "git executable (env CHANGERULE_GIT)")->capture_default_str();
  ev->add_option("--clone-dir", ev_clone_dir, "Clone remote repositories here (default: <out>/repos)");
  ev->add_option("--workers", ev_workers, "Worker threads (0 = all cores)")->capture_default_str();
  ev->add_option("--lambda", lambda, "Weight of the feature-set term")->check(CLI::Range(0.0, 0.999999));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      auto g = cr::frontend::build_aug_from_source(cr::read_text_file(build_file), build_method);
      if (build_out.empty()) {
        std::cout << cr::serialize(g);
      } else {
        cr::save_graph(build_out, g);
      }
    } else if (*infer) {
      auto rule = cr::build_change_rule(cr::load_graph(infer_m), cr::load_graph(infer_c), {infer_id, infer_commit});
      cr::save_rule(infer_out, rule);
      std::cout << "rule: " << rule.misuse.node_count() << " misuse nodes, " << rule.fix.node_count()
                << " fix nodes, " << rule.transform.size() << " transform edges\n";
    } else if (*vec) {
      auto g = cr::load_graph(vec_file);
      if (vec_split) {
        for (const auto& [group, sub] : cr::split_graph(g)) {
          std::cout << "# " << group << '\n';
          print_vector(transform(cr::vectorize(sub), vec_api, vec_ind));
        }
      } else {
        print_vector(transform(cr::vectorize(g), vec_api, vec_ind));
      }
    } else if (*dist) {
      auto cfg = cr::distance_config(dist_fn, lambda);
      std::cout << fmt6(cr::distance(cr::load_graph(dist_a), cr::load_graph(dist_b), cfg)) << '\n';
    } else if (*det) {
      auto cfg = cr::distance_config(det_fn, lambda);
      auto v = cr::detect(cr::load_rule(det_rule), cr::load_graph(det_usage), cfg, det_threshold);
      std::cout << "applicable\t" << (v.applicable ? "true" : "false") << '\n'
                << "is_misuse\t" << (v.is_misuse ? "true" : "false") << '\n'
                << "d_rm\t" << fmt6(v.d_rm) << '\n'
                << "d_rc\t" << fmt6(v.d_rc) << '\n';
    } else if (*ev) {
      hv::GridOptions opts;
      opts.cfgs = parse_fns(ev_fns, lambda);
      opts.thresholds = parse_thresholds(ev_thresholds);
      opts.workers = ev_workers;
      std::filesystem::create_directories(ev_out);
      hv::LoadOptions load;
      load.node_limit = ev_limit;
      load.clone_dir = ev_clone_dir.empty() ? (std::filesystem::path(ev_out) / "repos").string() : ev_clone_dir;
      auto rules = hv::load_manifest(ev_rules, false);
      auto usages = ev_usages.empty() ? std::vector<hv::ManifestEntry>{} : hv::load_manifest(ev_usages, true);
      hv::Corpus corpus = hv::load_corpus(rules, usages, hv::GitClient(ev_git), load);
      for (const auto& s : corpus.skipped) std::cerr << "skipped " << s.manifest << ' ' << s.id << ": " << s.reason << '\n';

      hv::PreparedCorpus prepared = hv::prepare(corpus.rules, corpus.usages, opts.workers);
      nlohmann::json doc;
      doc["attrition"] = hv::attrition_json(corpus.attrition);
      std::vector<std::pair<std::string, const hv::AggregateReport*>> sections;
      hv::AggregateReport overall;
      std::optional<hv::CrossValidation> cv;
      if (ev_folds >= 2) {
        cv = hv::cross_validate(prepared, ev_folds, opts);
        for (const auto& w : cv->warnings) std::cerr << "warning: " << w << '\n';
        doc["buckets"] = {{"capacity", cv->buckets.capacity}, {"sizes", cv->buckets.sizes}};
        doc["folds"] = nlohmann::json::array();
        for (std::size_t f = 0; f < cv->folds.size(); ++f) {
          if (cv->folds[f]) {
            sections.emplace_back(std::to_string(f + 1), &*cv->folds[f]);
            doc["folds"].push_back(hv::report_json(*cv->folds[f]));
          } else {
            doc["folds"].push_back(nullptr);
          }
        }
        overall = cv->overall;
      } else {
        overall = hv::grid_search(prepared, opts);
      }
      sections.emplace_back("overall", &overall);
      doc["overall"] = hv::report_json(overall);
      doc["skipped"] = nlohmann::json::array();
      for (const auto& s : corpus.skipped)
        doc["skipped"].push_back({{"manifest", s.manifest}, {"entry", s.id}, {"reason", s.reason}});

      const std::filesystem::path out(ev_out);
      cr::write_text_file((out / "report.tsv").string(), hv::report_tsv(sections));
      cr::write_text_file((out / "report.json").string(), doc.dump(2) + "\n");
      cr::write_text_file((out / "skipped.tsv").string(), hv::skipped_tsv(corpus.skipped));
      const auto& a = corpus.attrition;
      std::cout << "rules: " << a.rule_entries << " entries, " << a.rule_augs_built << " with graphs, "
                << a.non_empty_rules << " non-empty, " << a.rules_after_size_filter << " after size filter\n"
                << "usages: " << a.usage_entries << " entries, " << a.usage_augs_built << " with graphs, "
                << a.usages_after_size_filter << " after size filter\n"
                << "report written to " << ev_out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
