#pragma once

// A small declarative language for mechanistic model functions:
//
//   param t0 = 10;                 # fixed parameter
//   param t1 in [0.25, 0.40];      # range parameter (search dimension)
//   var a in binary;
//   fun g(a) = expit(t0 + t1 * a);
//
// Functions are total: no loops, and a body may call only functions declared
// before it, so evaluation always terminates.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalbounds/error.hpp"
#include "causalbounds/probability.hpp"

namespace causalbounds::dsl {

struct SourcePos {
  int line = 1;
  int column = 1;
  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

enum class ParseErrorKind { lexical, syntax, duplicate_name, unresolved_identifier, arity };

std::string to_string(ParseErrorKind kind);

class ParseError : public InputError {
 public:
  ParseError(ParseErrorKind kind, SourcePos pos, const std::string& message);
  ParseErrorKind kind() const noexcept { return kind_; }
  SourcePos pos() const noexcept { return pos_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ParseErrorKind kind_;
  SourcePos pos_;
  std::string message_;
};

// ---- expression tree ------------------------------------------------------

enum class BinaryOp { add, sub, mul, div, pow, lt, le, gt, ge };
enum class Builtin { expit, indicator, min, max };

std::string_view symbol(BinaryOp op) noexcept;
std::string_view name(Builtin fn) noexcept;
std::size_t arity(Builtin fn) noexcept;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct NumberLit {
  double value = 0.0;
};
/// Identifier resolved to a parameter, variable, or function argument slot.
struct Ref {
  enum class Kind { param, var, arg };
  Kind kind = Kind::param;
  std::string name;
  std::size_t index = 0;
};
struct Negate {
  ExprPtr operand;
};
struct BinaryExpr {
  BinaryOp op = BinaryOp::add;
  ExprPtr lhs;
  ExprPtr rhs;
};
struct BuiltinCall {
  Builtin fn = Builtin::expit;
  std::vector<ExprPtr> args;
};
/// Call to a previously declared function, resolved to its declaration index.
struct FunCall {
  std::string name;
  std::size_t index = 0;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<NumberLit, Ref, Negate, BinaryExpr, BuiltinCall, FunCall> node;
  SourcePos pos;
};

bool structurally_equal(const Expr& a, const Expr& b);

// ---- declarations ---------------------------------------------------------

struct ParamDecl {
  std::string name;
  /// Fixed value or search range.
  std::variant<double, Interval> kind;
  SourcePos pos;

  bool is_fixed() const noexcept { return std::holds_alternative<double>(kind); }
  double fixed_value() const { return std::get<double>(kind); }
  const Interval& range() const { return std::get<Interval>(kind); }
};

struct VarDecl {
  std::string name;
  /// Absent means binary {0, 1}.
  std::optional<Interval> range;
  SourcePos pos;
  bool is_binary() const noexcept { return !range.has_value(); }
};

struct FunDecl {
  std::string name;
  std::vector<std::string> args;
  ExprPtr body;
  SourcePos pos;
};

/// Parsed, fully resolved model. Immutable after parsing.
class ModelSpec {
 public:
  const std::vector<ParamDecl>& params() const noexcept { return params_; }
  const std::vector<VarDecl>& vars() const noexcept { return vars_; }
  const std::vector<FunDecl>& funs() const noexcept { return funs_; }
  /// Non-fatal diagnostics from parsing (e.g. literal 0^0).
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  std::optional<std::size_t> find_param(std::string_view name) const;
  std::optional<std::size_t> find_var(std::string_view name) const;
  std::optional<std::size_t> find_fun(std::string_view name) const;

 private:
  friend class Parser;
  std::vector<ParamDecl> params_;
  std::vector<VarDecl> vars_;
  std::vector<FunDecl> funs_;
  std::vector<std::string> warnings_;
};

/// Throws ParseError (lexical, syntax, duplicate-name, unresolved-identifier, arity).
ModelSpec parse_model(std::string_view source);

/// Canonical source text; parse_model(to_source(s)) is structurally equal to s.
std::string to_source(const ModelSpec& spec);

bool structurally_equal(const ModelSpec& a, const ModelSpec& b);

/// Range-kind parameters in declaration order.
std::vector<NamedInterval> free_range_params(const ModelSpec& spec);

// ---- evaluation -----------------------------------------------------------

/// Name -> value for every parameter and (referenced) variable.
using Binding = std::map<std::string, double, std::less<>>;

/// Binding resolved against one spec: dense slots indexed like the declarations.
class SlotBinding {
 public:
  /// Validates: every parameter present, fixed parameters at their declared
  /// value, range parameters inside their interval, binary variables 0 or 1.
  /// Unknown names are rejected. Throws BindingError.
  static SlotBinding resolve(const ModelSpec& spec, const Binding& binding);
  /// Fixed parameters at their value, range parameters at their lower end,
  /// variables unbound.
  static SlotBinding defaults(const ModelSpec& spec);

  std::span<const double> params() const noexcept { return params_; }
  /// Set a parameter slot directly. No range check; the caller owns validity.
  void set_param(std::size_t index, double value) noexcept { params_[index] = value; }
  double var(std::size_t index) const noexcept { return vars_[index]; }
  bool var_bound(std::size_t index) const noexcept { return var_bound_[index]; }

  /// Back to a name/value map in declaration order (params then bound vars).
  ParamPoint to_point(const ModelSpec& spec) const;

 private:
  std::vector<double> params_;
  std::vector<double> vars_;
  std::vector<bool> var_bound_;
};

/// Strict recursive evaluation of a declared function.
/// Throws EvaluationError on division by zero or non-finite results,
/// BindingError for unbound variables, DomainError for unknown functions or
/// wrong arity.
double evaluate(const ModelSpec& spec, std::size_t fun_index, std::span<const double> args,
                const SlotBinding& binding);
double evaluate(const ModelSpec& spec, std::string_view fun_name, std::span<const double> args,
                const Binding& binding);

/// Logistic function saturating inside the open interval (0, 1).
double safe_expit(double x) noexcept;

}  // namespace causalbounds::dsl
