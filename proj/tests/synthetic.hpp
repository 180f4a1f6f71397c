#pragma once

// Planted misuse/fix corpus: ten templates over disjoint API types, cloned
// with renamed variables, plus unrelated correct usages.

#include <string>
#include <vector>

#include "changerule/frontend/aug_builder.hpp"
#include "changerule/harness/evaluate.hpp"

namespace synthetic {

inline constexpr int kTemplates = 10;

struct Source {
  std::string package;
  std::string class_name;
  std::string text;
};

struct Pair {
  int tmpl = 0;
  int clone = 0;
  Source misuse;
  Source fix;
};

namespace detail {

inline std::string sfx(int t) { return std::to_string(t); }

// Bodies over receiver r of type Res<t>, parameter c of type Conf<t>.
inline std::pair<std::string, std::string> bodies(int t, const std::string& r, const std::string& c) {
  const std::string R = "Res" + sfx(t), C = "Conf" + sfx(t), x = r + "Out";
  switch (t % 5) {
    case 0:
      return {R + " " + x + " = new " + R + "(" + c + "); " + x + ".read();",
              R + " " + x + " = new " + R + "(" + c + "); " + x + ".open(); " + x + ".read();"};
    case 1:
      return {r + ".use(" + c + "); " + r + ".log();",
              "if (" + r + ".isReady()) { " + r + ".use(" + c + "); } " + r + ".log();"};
    case 2:
      return {r + ".write(" + c + "); " + r + ".close();",
              "try { " + r + ".write(" + c + "); } finally { " + r + ".close(); }"};
    case 3:
      return {r + ".commit(); " + r + ".prepare(" + c + ");", r + ".prepare(" + c + "); " + r + ".commit();"};
    default:
      return {C + " " + x + " = " + r + ".fetch(); " + x + ".apply();",
              C + " " + x + " = " + r + ".fetch(); " + x + ".apply(); " + r + ".release();"};
  }
}

inline Source unit(const std::string& pkg, const std::string& cls, const std::string& imports,
                   const std::string& params, const std::string& body) {
  return {pkg, cls,
          "package " + pkg + ";\n\n" + imports + "\npublic class " + cls + " {\n    void work(" + params +
              ") {\n        " + body + "\n    }\n}\n"};
}

}  // namespace detail

/// Clone `clone` of template `t`; variable names differ per clone.
inline Pair planted_pair(int t, int clone) {
  const std::string r = "res" + std::to_string(clone) + "v", c = "cfg" + std::to_string(clone) + "v";
  const std::string api = "de.tmpl" + detail::sfx(t);
  const std::string imports =
      "import " + api + ".Res" + detail::sfx(t) + ";\nimport " + api + ".Conf" + detail::sfx(t) + ";\n";
  const std::string params = "Res" + detail::sfx(t) + " " + r + ", Conf" + detail::sfx(t) + " " + c;
  const auto [m, f] = detail::bodies(t, r, c);
  const std::string pkg = "org.app.t" + std::to_string(t);
  const std::string cls = "Client" + std::to_string(clone);
  return {t, clone, detail::unit(pkg, cls, imports, params, m), detail::unit(pkg, cls, imports, params, f)};
}

/// A correct usage over API types no template touches.
inline Source unrelated_usage(int u) {
  const std::string api = "org.paint" + std::to_string(u % 7);
  const std::string W = "Widget" + std::to_string(u % 7), V = "Canvas" + std::to_string(u % 3);
  const std::string imports = "import " + api + "." + W + ";\nimport " + api + "." + V + ";\n";
  std::string body = "w.paint(v); v.flush();";
  if (u % 2) body = "v.clear(); w.paint(v); w.resize(v);";
  return detail::unit("org.app.misc", "Usage" + std::to_string(u), imports, W + " w, " + V + " v", body);
}

inline std::string file_path(const Source& s) {
  std::string p = "src/";
  for (char ch : s.package) p += ch == '.' ? '/' : ch;
  return p + "/" + s.class_name + ".java";
}

/// In-memory rule cases (no version control), `clones` per template.
inline std::vector<changerule::harness::RuleCase> rule_cases(int clones, int repos) {
  std::vector<changerule::harness::RuleCase> out;
  int n = 0;
  for (int c = 0; c < clones; ++c) {
    for (int t = 0; t < kTemplates; ++t, ++n) {
      Pair p = planted_pair(t, c);
      changerule::harness::RuleCase rc;
      rc.id = "t" + std::to_string(t) + "c" + std::to_string(c);
      rc.repo = "repo" + std::to_string(n % repos);
      rc.misuse_aug = changerule::frontend::build_aug_from_source(p.misuse.text, "work");
      rc.fix_aug = changerule::frontend::build_aug_from_source(p.fix.text, "work");
      rc.rule = changerule::build_change_rule(rc.misuse_aug, rc.fix_aug, {rc.id, ""});
      out.push_back(std::move(rc));
    }
  }
  return out;
}

}  // namespace synthetic
