#pragma once

// Syntax tree for the supported Java subset: package and import
// declarations, classes with fields and methods, and method bodies made of
// declarations, calls, constructor calls, if, try/finally and return.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace changerule::frontend {

struct SourcePos {
  int line = 1;
  int column = 1;
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct VarRef {
  std::string name;
};

enum class LiteralKind { String, Char, Number, Boolean, Null };

struct Literal {
  LiteralKind kind = LiteralKind::Null;
  std::string text;  // source spelling, quotes included for strings
};

/// `receiver.method(args)`; a missing receiver is an implicit `this` call.
/// A receiver naming a type (static call) is recorded in `static_type`.
struct Call {
  ExprPtr receiver;
  std::string static_type;
  std::string method;
  std::vector<ExprPtr> args;
};

struct New {
  std::string type;
  std::vector<ExprPtr> args;
};

struct Not {
  ExprPtr operand;
};

struct Expr {
  std::variant<VarRef, Literal, Call, New, Not> node;
  SourcePos pos;
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct VarDecl {
  std::string type;
  std::string name;
  ExprPtr init;
};

struct Assign {
  std::string target;
  ExprPtr value;
};

struct ExprStmt {
  ExprPtr expr;
};

struct If {
  ExprPtr condition;
  Block then_block;
};

struct TryFinally {
  Block try_block;
  Block finally_block;
};

struct Return {
  ExprPtr value;
};

struct Stmt {
  std::variant<VarDecl, Assign, ExprStmt, If, TryFinally, Return, Block> node;
  SourcePos pos;
};

struct Param {
  std::string type;
  std::string name;
};

struct MethodDecl {
  std::string name;
  std::string return_type;
  std::vector<Param> params;
  Block body;
  SourcePos pos;
};

struct FieldDecl {
  std::string type;
  std::string name;
};

struct ClassDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
};

struct SourceUnit {
  std::string package_name;
  std::vector<std::string> imports;
  std::vector<ClassDecl> classes;
};

}  // namespace changerule::frontend
