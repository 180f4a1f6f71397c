#pragma once

// Builds one usage graph per method declaration.
//
// Data nodes: one per parameter and local variable (labeled with the simple
// type name), one per used field, one per literal occurrence (labeled with
// its source text), and one "UNKNOWN" node per call result that is consumed
// without being stored in a variable, since call result types are not
// resolvable without library signatures.
//
// Action nodes: "Type.method()" per call, "Type.<init>" per constructor call
// and "<return>" per return statement, created in evaluation order
// (arguments and receivers before the call that consumes them).
//
// Edges: recv (receiver -> call), para (argument -> call, value -> return),
// def (call -> assigned variable or result node), sel (condition call ->
// every action of the then-block), finally (every try action -> every
// finally action), and order between consecutive actions followed by
// transitive closure.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "changerule/frontend/ast.hpp"
#include "changerule/frontend/parser.hpp"
#include "changerule/graph.hpp"

namespace changerule::frontend {

class MethodNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string simple_name(std::string_view type) {
  auto dot = type.rfind('.');
  return std::string(dot == std::string_view::npos ? type : type.substr(dot + 1));
}

/// Resolves simple type names to fully qualified API types against a
/// unit's imports: exact single-type import first, then well-known
/// java.lang classes (implicitly imported in Java), then the first
/// on-demand import. Unresolvable names yield the empty string.
class TypeResolver {
 public:
  explicit TypeResolver(const SourceUnit& unit) {
    for (const auto& imp : unit.imports) {
      if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) {
        wildcards_.push_back(imp.substr(0, imp.size() - 2));
      } else {
        exact_.emplace(simple_name(imp), imp);
      }
    }
  }

  std::string resolve(std::string_view type) const {
    std::string t(type);
    while (t.size() > 2 && t.compare(t.size() - 2, 2, "[]") == 0) t.resize(t.size() - 2);
    if (t.empty() || is_primitive(t)) return {};
    if (t.find('.') != std::string::npos) return t;
    if (auto it = exact_.find(t); it != exact_.end()) return it->second;
    if (is_java_lang(t)) return "java.lang." + t;
    if (!wildcards_.empty()) return wildcards_.front() + "." + t;
    return {};
  }

  static bool is_primitive(std::string_view t) {
    static constexpr std::string_view kPrimitives[] = {"boolean", "byte",  "char", "short",
                                                       "int",     "long",  "float", "double"};
    for (auto p : kPrimitives)
      if (p == t) return true;
    return false;
  }

  static bool is_java_lang(std::string_view t) {
    static constexpr std::string_view kJavaLang[] = {
        "Object",   "String",    "StringBuilder", "StringBuffer", "Integer",   "Long",
        "Short",    "Byte",      "Character",     "Boolean",      "Double",    "Float",
        "Number",   "Math",      "System",        "Thread",       "Runnable",  "Exception",
        "RuntimeException", "Error", "Throwable", "Class",        "Iterable",  "Enum",
        "Void",     "Process",   "Runtime",       "CharSequence", "Comparable", "AutoCloseable"};
    for (auto j : kJavaLang)
      if (j == t) return true;
    return false;
  }

 private:
  std::map<std::string, std::string> exact_;
  std::vector<std::string> wildcards_;
};

namespace detail {

class AugBuilder {
 public:
  AugBuilder(const SourceUnit& unit, const ClassDecl& cls, const MethodDecl& method)
      : resolver_(unit), cls_(cls), graph_(method_id(unit, cls, method)) {
    for (const auto& f : cls.fields) field_types_.emplace(f.name, f.type);
  }

  UsageGraph build(const MethodDecl& method) {
    scopes_.emplace_back();
    for (const auto& p : method.params) declare(p.name, p.type);
    block(method.body);
    for (std::size_t i = 1; i < actions_.size(); ++i) graph_.add_edge(actions_[i - 1], actions_[i], EdgeLabel::Order);
    return order_closure(graph_);
  }

  static std::string method_id(const SourceUnit& unit, const ClassDecl& cls, const MethodDecl& m) {
    std::string id = unit.package_name.empty() ? cls.name : unit.package_name + "." + cls.name;
    id += "#" + m.name + "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) id += (i ? "," : "") + m.params[i].type;
    return id + ")";
  }

 private:
  // A value produced by an expression: its data node (if any) and the
  // simple type label used to name calls on it.
  struct Value {
    std::optional<std::size_t> node;
    std::string type_label;
    std::string api_type;
  };

  std::size_t declare(const std::string& name, const std::string& type) {
    const std::size_t v = graph_.add_node(NodeKind::Data, simple_name(type), resolver_.resolve(type));
    scopes_.back()[name] = v;
    return v;
  }

  std::size_t lookup(const std::string& name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      if (auto f = it->find(name); f != it->end()) return f->second;
    if (auto f = fields_.find(name); f != fields_.end()) return f->second;
    auto t = field_types_.find(name);
    if (t == field_types_.end()) throw std::logic_error("undeclared name survived resolution: " + name);
    const std::size_t v =
        graph_.add_node(NodeKind::Data, simple_name(t->second), resolver_.resolve(t->second));
    fields_.emplace(name, v);
    return v;
  }

  std::size_t add_action(std::string label, std::string api_type) {
    const std::size_t a = graph_.add_node(NodeKind::Action, std::move(label), std::move(api_type));
    actions_.push_back(a);
    return a;
  }

  void block(const Block& b) {
    scopes_.emplace_back();
    for (const auto& s : b) stmt(*s);
    scopes_.pop_back();
  }

  // Evaluates `e` and stores its result into `target` (def edge) when the
  // expression is a call or constructor call.
  void assign_into(const Expr& e, std::size_t target) {
    if (std::holds_alternative<Call>(e.node) || std::holds_alternative<New>(e.node)) {
      auto a = eval_action(e);
      graph_.add_edge(*a, target, EdgeLabel::Def);
    } else if (!std::holds_alternative<Literal>(e.node) && !std::holds_alternative<VarRef>(e.node)) {
      eval(e, false);
    }
  }

  void stmt(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDecl>) {
            const std::size_t v = declare(n.name, n.type);
            if (n.init) assign_into(*n.init, v);
          } else if constexpr (std::is_same_v<T, Assign>) {
            assign_into(*n.value, lookup(n.target));
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            eval(*n.expr, false);
          } else if constexpr (std::is_same_v<T, If>) {
            const std::size_t first = actions_.size();
            eval(*n.condition, false);
            const std::optional<std::size_t> check =
                actions_.size() > first ? std::optional<std::size_t>(actions_.back()) : std::nullopt;
            const std::size_t body_begin = actions_.size();
            block(n.then_block);
            if (check)
              for (std::size_t i = body_begin; i < actions_.size(); ++i)
                graph_.add_edge(*check, actions_[i], EdgeLabel::Sel);
          } else if constexpr (std::is_same_v<T, TryFinally>) {
            const std::size_t try_begin = actions_.size();
            block(n.try_block);
            const std::size_t fin_begin = actions_.size();
            block(n.finally_block);
            for (std::size_t i = try_begin; i < fin_begin; ++i)
              for (std::size_t j = fin_begin; j < actions_.size(); ++j)
                graph_.add_edge(actions_[i], actions_[j], EdgeLabel::Finally);
          } else if constexpr (std::is_same_v<T, Return>) {
            std::optional<std::size_t> value;
            if (n.value) value = eval(*n.value, true).node;
            const std::size_t r = add_action(std::string(kReturnLabel), {});
            if (value) graph_.add_edge(*value, r, EdgeLabel::Para);
          } else if constexpr (std::is_same_v<T, Block>) {
            block(n);
          }
        },
        s.node);
  }

  // Evaluates a call or constructor call and returns its action node.
  std::optional<std::size_t> eval_action(const Expr& e) {
    if (const auto* c = std::get_if<Call>(&e.node)) {
      std::optional<Value> recv;
      std::string owner;
      std::string api;
      if (c->receiver) {
        recv = eval(*c->receiver, true);
        owner = recv->type_label;
        api = recv->api_type;
      } else if (!c->static_type.empty()) {
        owner = simple_name(c->static_type);
        api = resolver_.resolve(c->static_type);
      } else {
        owner = cls_.name;
      }
      std::vector<Value> args;
      for (const auto& a : c->args) args.push_back(eval(*a, true));
      const std::size_t act = add_action(owner + "." + c->method + "()", api);
      if (recv && recv->node) graph_.add_edge(*recv->node, act, EdgeLabel::Recv);
      for (const auto& a : args)
        if (a.node) graph_.add_edge(*a.node, act, EdgeLabel::Para);
      return act;
    }
    if (const auto* n = std::get_if<New>(&e.node)) {
      std::vector<Value> args;
      for (const auto& a : n->args) args.push_back(eval(*a, true));
      const std::size_t act = add_action(simple_name(n->type) + ".<init>", resolver_.resolve(n->type));
      for (const auto& a : args)
        if (a.node) graph_.add_edge(*a.node, act, EdgeLabel::Para);
      return act;
    }
    return std::nullopt;
  }

  // `need_value`: the result is consumed, so call results get a data node.
  Value eval(const Expr& e, bool need_value) {
    if (const auto* v = std::get_if<VarRef>(&e.node)) {
      const std::size_t node = lookup(v->name);
      return {node, graph_.node(node).label, graph_.node(node).api_type};
    }
    if (const auto* lit = std::get_if<Literal>(&e.node)) {
      const std::size_t node = graph_.add_node(NodeKind::Data, lit->text, {});
      switch (lit->kind) {
        case LiteralKind::String: return {node, "String", "java.lang.String"};
        case LiteralKind::Char: return {node, "char", {}};
        case LiteralKind::Number: return {node, "int", {}};
        case LiteralKind::Boolean: return {node, "boolean", {}};
        case LiteralKind::Null: return {node, "Object", {}};
      }
      return {node, "Object", {}};
    }
    if (const auto* neg = std::get_if<Not>(&e.node)) return eval(*neg->operand, need_value);
    const std::size_t act = *eval_action(e);
    if (!need_value) return {};
    if (const auto* n = std::get_if<New>(&e.node)) {
      const std::size_t res = graph_.add_node(NodeKind::Data, simple_name(n->type), resolver_.resolve(n->type));
      graph_.add_edge(act, res, EdgeLabel::Def);
      return {res, graph_.node(res).label, graph_.node(res).api_type};
    }
    const std::size_t res = graph_.add_node(NodeKind::Data, std::string(kUnknownLabel), {});
    graph_.add_edge(act, res, EdgeLabel::Def);
    return {res, std::string(kUnknownLabel), {}};
  }

  TypeResolver resolver_;
  const ClassDecl& cls_;
  UsageGraph graph_;
  std::vector<std::map<std::string, std::size_t>> scopes_;
  std::map<std::string, std::string> field_types_;
  std::map<std::string, std::size_t> fields_;
  std::vector<std::size_t> actions_;
};

inline std::vector<std::string> split_params(std::string_view list) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    auto b = cur.find_first_not_of(" \t");
    auto e = cur.find_last_not_of(" \t");
    if (b != std::string::npos) {
      std::string p = cur.substr(b, e - b + 1);
      // "Type name" -> "Type"
      if (auto sp = p.find_first_of(" \t"); sp != std::string::npos) p = p.substr(0, sp);
      out.push_back(simple_name(p));
    }
    cur.clear();
  };
  for (char c : list) {
    if (c == ',') flush();
    else cur += c;
  }
  flush();
  return out;
}

}  // namespace detail

/// Finds the method named by `method_decl` and builds its usage graph.
/// `method_decl` is either a plain name ("process"), a class-qualified name
/// ("Client.process"), or a declaration with parameter types
/// ("process(Foo, Bar)") to pick among overloads.
inline UsageGraph build_aug(const SourceUnit& unit, std::string_view method_decl) {
  std::string_view name = method_decl;
  std::optional<std::vector<std::string>> param_types;
  if (auto open = name.find('('); open != std::string_view::npos) {
    auto close = name.rfind(')');
    if (close == std::string_view::npos || close < open)
      throw MethodNotFound("malformed method declaration '" + std::string(method_decl) + "'");
    param_types = detail::split_params(name.substr(open + 1, close - open - 1));
    name = name.substr(0, open);
  }
  while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
  if (auto sp = name.rfind(' '); sp != std::string_view::npos) name = name.substr(sp + 1);  // drop return type
  std::string_view class_filter;
  if (auto dot = name.rfind('.'); dot != std::string_view::npos) {
    class_filter = name.substr(0, dot);
    if (auto d2 = class_filter.rfind('.'); d2 != std::string_view::npos) class_filter = class_filter.substr(d2 + 1);
    name = name.substr(dot + 1);
  }
  for (const auto& cls : unit.classes) {
    if (!class_filter.empty() && cls.name != class_filter) continue;
    for (const auto& m : cls.methods) {
      if (m.name != name) continue;
      if (param_types) {
        std::vector<std::string> actual;
        for (const auto& p : m.params) actual.push_back(simple_name(p.type));
        if (actual != *param_types) continue;
      }
      detail::AugBuilder builder(unit, cls, m);
      return builder.build(m);
    }
  }
  throw MethodNotFound("method '" + std::string(method_decl) + "' not found");
}

inline UsageGraph build_aug_from_source(std::string_view source, std::string_view method_decl) {
  return build_aug(parse(source), method_decl);
}

}  // namespace changerule::frontend
