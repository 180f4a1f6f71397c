#pragma once

// Recursive-descent parser for the supported Java subset. Generics,
// lambdas, loops, else-branches, catch clauses and nested classes are
// rejected with a SyntaxError. After parsing, every method body is checked
// for use-before-declare; an undeclared receiver that names a type (an
// imported simple name or a capitalized identifier) becomes a static call.

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "changerule/frontend/ast.hpp"
#include "changerule/frontend/lexer.hpp"

namespace changerule::frontend {

class DeclarationError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  SourceUnit parse_unit() {
    SourceUnit unit;
    skip_annotations();
    if (accept_keyword("package")) {
      unit.package_name = qualified_name();
      expect(";");
    }
    while (accept_keyword("import")) {
      accept_keyword("static");
      std::string name = ident("import name");
      bool wildcard = false;
      while (accept(".")) {
        if (accept("*")) {
          wildcard = true;
          break;
        }
        name += "." + ident("import name");
      }
      if (wildcard) {
        name += ".*";
      } else if (name.find('.') == std::string::npos) {
        fail("import must be fully qualified");
      }
      expect(";");
      unit.imports.push_back(std::move(name));
    }
    while (!at_end()) unit.classes.push_back(class_decl());
    return unit;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Punct && peek(ahead).text == p;
  }
  bool is_keyword(std::string_view k, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::Keyword && peek(ahead).text == k;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  bool accept_keyword(std::string_view k) {
    if (!is_keyword(k)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().pos); }
  std::string describe(const Token& t) const {
    return t.kind == TokenKind::End ? std::string("end of input") : "'" + t.text + "'";
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  }
  std::string ident(std::string_view what) {
    if (peek().kind != TokenKind::Identifier)
      fail("expected " + std::string(what) + " but found " + describe(peek()));
    return next().text;
  }
  std::string qualified_name() {
    std::string name = ident("name");
    while (is_punct(".") && peek(1).kind == TokenKind::Identifier) {
      next();
      name += "." + next().text;
    }
    return name;
  }

  void skip_annotations() {
    while (is_punct("@")) {
      next();
      qualified_name();
      if (accept("(")) {
        int depth = 1;
        while (depth > 0) {
          if (at_end()) fail("unterminated annotation");
          if (is_punct("(")) ++depth;
          if (is_punct(")")) --depth;
          next();
        }
      }
    }
  }

  void skip_modifiers() {
    for (;;) {
      skip_annotations();
      if (accept_keyword("public") || accept_keyword("private") || accept_keyword("protected") ||
          accept_keyword("static") || accept_keyword("final") || accept_keyword("abstract") ||
          accept_keyword("synchronized"))
        continue;
      return;
    }
  }

  std::string type_name() {
    std::string t = qualified_name();
    if (is_punct("<")) fail("generic types are not supported");
    while (is_punct("[") && is_punct("]", 1)) {
      next();
      next();
      t += "[]";
    }
    return t;
  }

  ClassDecl class_decl() {
    skip_modifiers();
    if (is_keyword("interface")) fail("interfaces are not supported");
    if (!accept_keyword("class")) fail("expected class declaration but found " + describe(peek()));
    ClassDecl cls;
    cls.name = ident("class name");
    if (accept_keyword("extends")) type_name();
    if (accept_keyword("implements")) {
      type_name();
      while (accept(",")) type_name();
    }
    expect("{");
    while (!accept("}")) {
      if (at_end()) fail("expected '}' to close class " + cls.name);
      member(cls);
    }
    return cls;
  }

  void member(ClassDecl& cls) {
    skip_modifiers();
    if (is_keyword("class") || is_keyword("interface")) fail("nested classes are not supported");
    const SourcePos pos = peek().pos;
    std::string type;
    std::string name;
    if (accept_keyword("void")) {
      type = "void";
      name = ident("method name");
    } else if (peek().kind == TokenKind::Identifier && peek().text == cls.name && is_punct("(", 1)) {
      name = next().text;  // constructor
    } else {
      type = type_name();
      name = ident("member name");
    }
    if (!is_punct("(")) {
      if (type == "void") fail("expected '(' after method name");
      if (accept("=")) expression();  // field initializers are not part of any method graph
      expect(";");
      cls.fields.push_back({std::move(type), std::move(name)});
      return;
    }
    MethodDecl m;
    m.name = std::move(name);
    m.return_type = std::move(type);
    m.pos = pos;
    expect("(");
    if (!is_punct(")")) {
      do {
        skip_modifiers();
        Param p;
        p.type = type_name();
        p.name = ident("parameter name");
        m.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    if (accept_keyword("throws")) {
      qualified_name();
      while (accept(",")) qualified_name();
    }
    m.body = block();
    cls.methods.push_back(std::move(m));
  }

  Block block() {
    expect("{");
    Block b;
    while (!accept("}")) {
      if (at_end()) fail("expected '}' but found end of input");
      b.push_back(statement());
    }
    return b;
  }

  // Body of an if: either a braced block or a single statement.
  Block branch() {
    if (is_punct("{")) return block();
    Block b;
    b.push_back(statement());
    return b;
  }

  // Lookahead for "Type name" at the current position.
  bool at_declaration() const {
    std::size_t k = 0;
    if (peek(k).kind != TokenKind::Identifier) return false;
    ++k;
    while (peek(k).kind == TokenKind::Punct && peek(k).text == "." && peek(k + 1).kind == TokenKind::Identifier)
      k += 2;
    while (peek(k).kind == TokenKind::Punct && peek(k).text == "[" && peek(k + 1).text == "]") k += 2;
    if (peek(k).kind == TokenKind::Punct && peek(k).text == "<") return true;  // reported by type_name
    return peek(k).kind == TokenKind::Identifier;
  }

  StmtPtr statement() {
    auto s = std::make_unique<Stmt>();
    s->pos = peek().pos;
    if (is_punct("{")) {
      s->node = block();
    } else if (accept_keyword("if")) {
      expect("(");
      If node;
      node.condition = expression();
      expect(")");
      node.then_block = branch();
      if (is_keyword("else")) fail("else branches are not supported");
      s->node = std::move(node);
    } else if (accept_keyword("try")) {
      TryFinally node;
      node.try_block = block();
      if (is_keyword("catch")) fail("catch clauses are not supported");
      if (!accept_keyword("finally")) fail("expected 'finally' after try block");
      node.finally_block = block();
      s->node = std::move(node);
    } else if (accept_keyword("return")) {
      Return node;
      if (!is_punct(";")) node.value = expression();
      expect(";");
      s->node = std::move(node);
    } else if (is_keyword("while") || is_keyword("for") || is_keyword("do")) {
      fail("loops are not supported");
    } else if (is_keyword("switch")) {
      fail("switch statements are not supported");
    } else if (is_keyword("final") || at_declaration()) {
      accept_keyword("final");
      VarDecl node;
      node.type = type_name();
      node.name = ident("variable name");
      if (accept("=")) node.init = expression();
      expect(";");
      s->node = std::move(node);
    } else if (peek().kind == TokenKind::Identifier && is_punct("=", 1)) {
      Assign node;
      node.target = next().text;
      next();
      node.value = expression();
      expect(";");
      s->node = std::move(node);
    } else {
      ExprStmt node;
      node.expr = expression();
      if (!std::holds_alternative<Call>(node.expr->node) && !std::holds_alternative<New>(node.expr->node))
        throw SyntaxError("expression statement must be a call", s->pos);
      expect(";");
      s->node = std::move(node);
    }
    return s;
  }

  std::vector<ExprPtr> arguments() {
    const SourcePos open = peek().pos;
    expect("(");
    std::vector<ExprPtr> args;
    auto unclosed = [&] {
      if (at_end()) throw SyntaxError("unclosed argument list", open);
    };
    if (!is_punct(")")) {
      do {
        unclosed();
        args.push_back(expression());
      } while (accept(","));
    }
    unclosed();
    expect(")");
    return args;
  }

  ExprPtr make(SourcePos pos, auto&& node) {
    auto e = std::make_unique<Expr>();
    e->pos = pos;
    e->node = std::forward<decltype(node)>(node);
    return e;
  }

  ExprPtr expression() {
    const SourcePos pos = peek().pos;
    if (accept("!")) return make(pos, Not{expression()});
    ExprPtr e = primary();
    while (is_punct(".")) {
      next();
      const SourcePos mpos = peek().pos;
      std::string name = ident("member name");
      if (!is_punct("(")) throw SyntaxError("field access is not supported", mpos);
      Call c;
      c.receiver = std::move(e);
      c.method = std::move(name);
      c.args = arguments();
      e = make(pos, std::move(c));
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    const SourcePos pos = t.pos;
    switch (t.kind) {
      case TokenKind::String:
        return make(pos, Literal{LiteralKind::String, next().text});
      case TokenKind::Char:
        return make(pos, Literal{LiteralKind::Char, next().text});
      case TokenKind::Number:
        return make(pos, Literal{LiteralKind::Number, next().text});
      case TokenKind::Keyword:
        if (accept_keyword("null")) return make(pos, Literal{LiteralKind::Null, "null"});
        if (is_keyword("true") || is_keyword("false")) return make(pos, Literal{LiteralKind::Boolean, next().text});
        if (accept_keyword("new")) {
          New n;
          n.type = type_name();
          n.args = arguments();
          return make(pos, std::move(n));
        }
        if (accept_keyword("this")) {
          expect(".");
          std::string name = ident("member name");
          if (!is_punct("(")) return make(pos, VarRef{std::move(name)});
          Call c;
          c.method = std::move(name);
          c.args = arguments();
          return make(pos, std::move(c));
        }
        break;
      case TokenKind::Identifier: {
        std::vector<std::string> chain{next().text};
        while (is_punct(".") && peek(1).kind == TokenKind::Identifier) {
          next();
          chain.push_back(next().text);
        }
        if (is_punct("(")) {
          Call c;
          c.method = chain.back();
          chain.pop_back();
          if (chain.size() == 1) {
            c.receiver = make(pos, VarRef{chain.front()});
          } else if (chain.size() > 1) {
            std::string qualified = chain.front();
            for (std::size_t i = 1; i < chain.size(); ++i) qualified += "." + chain[i];
            c.static_type = std::move(qualified);
          }
          c.args = arguments();
          return make(pos, std::move(c));
        }
        if (chain.size() > 1) throw SyntaxError("field access is not supported", pos);
        return make(pos, VarRef{chain.front()});
      }
      case TokenKind::Punct:
        if (accept("(")) {
          ExprPtr inner = expression();
          expect(")");
          return inner;
        }
        break;
      case TokenKind::End:
        break;
    }
    fail("expected expression but found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// Declaration checking and static-receiver resolution for one method.
class Resolver {
 public:
  Resolver(const SourceUnit& unit, const ClassDecl& cls) {
    for (const auto& imp : unit.imports) {
      auto dot = imp.rfind('.');
      if (imp.size() > 2 && imp.compare(imp.size() - 2, 2, ".*") == 0) continue;
      imported_.insert(imp.substr(dot + 1));
    }
    for (const auto& f : cls.fields) fields_.insert(f.name);
  }

  void check(MethodDecl& m) {
    scopes_.clear();
    scopes_.emplace_back();
    for (const auto& p : m.params) scopes_.back().insert(p.name);
    walk(m.body);
  }

 private:
  bool declared(const std::string& name) const {
    if (fields_.count(name)) return true;
    for (const auto& s : scopes_)
      if (s.count(name)) return true;
    return false;
  }
  bool names_type(const std::string& name) const {
    return imported_.count(name) || std::isupper(static_cast<unsigned char>(name.front()));
  }

  void walk(Block& b) {
    scopes_.emplace_back();
    for (auto& s : b) stmt(*s);
    scopes_.pop_back();
  }

  void stmt(Stmt& s) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDecl>) {
            if (n.init) expr(*n.init);
            scopes_.back().insert(n.name);
          } else if constexpr (std::is_same_v<T, Assign>) {
            if (!declared(n.target)) throw DeclarationError("use of undeclared variable '" + n.target + "'", s.pos);
            expr(*n.value);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(*n.expr);
          } else if constexpr (std::is_same_v<T, If>) {
            expr(*n.condition);
            walk(n.then_block);
          } else if constexpr (std::is_same_v<T, TryFinally>) {
            walk(n.try_block);
            walk(n.finally_block);
          } else if constexpr (std::is_same_v<T, Return>) {
            if (n.value) expr(*n.value);
          } else if constexpr (std::is_same_v<T, Block>) {
            walk(n);
          }
        },
        s.node);
  }

  void expr(Expr& e) {
    if (auto* v = std::get_if<VarRef>(&e.node)) {
      if (!declared(v->name)) throw DeclarationError("use of undeclared variable '" + v->name + "'", e.pos);
    } else if (auto* c = std::get_if<Call>(&e.node)) {
      if (c->receiver) {
        auto* recv = std::get_if<VarRef>(&c->receiver->node);
        if (recv && !declared(recv->name) && names_type(recv->name)) {
          c->static_type = recv->name;
          c->receiver.reset();
        } else {
          expr(*c->receiver);
        }
      }
      for (auto& a : c->args) expr(*a);
    } else if (auto* n = std::get_if<New>(&e.node)) {
      for (auto& a : n->args) expr(*a);
    } else if (auto* neg = std::get_if<Not>(&e.node)) {
      expr(*neg->operand);
    }
  }

  std::set<std::string> imported_;
  std::set<std::string> fields_;
  std::vector<std::set<std::string>> scopes_;
};

}  // namespace detail

/// Parses one source file. Throws SyntaxError (with line and column) on
/// malformed input and DeclarationError on use-before-declare.
inline SourceUnit parse(std::string_view source) {
  detail::Parser parser(tokenize(source));
  SourceUnit unit = parser.parse_unit();
  for (auto& cls : unit.classes) {
    detail::Resolver resolver(unit, cls);
    for (auto& m : cls.methods) resolver.check(m);
  }
  return unit;
}

}  // namespace changerule::frontend
