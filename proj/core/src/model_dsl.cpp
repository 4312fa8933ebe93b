#include "causalbounds/model_dsl.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>

namespace causalbounds::dsl {

std::string to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::lexical: return "lexical";
    case ParseErrorKind::syntax: return "syntax";
    case ParseErrorKind::duplicate_name: return "duplicate-name";
    case ParseErrorKind::unresolved_identifier: return "unresolved-identifier";
    case ParseErrorKind::arity: return "arity";
  }
  return "syntax";
}

ParseError::ParseError(ParseErrorKind kind, SourcePos pos, const std::string& message)
    : InputError(std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                 to_string(kind) + " error: " + message),
      kind_(kind),
      pos_(pos),
      message_(message) {}

std::string_view symbol(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
    case BinaryOp::lt: return "<";
    case BinaryOp::le: return "<=";
    case BinaryOp::gt: return ">";
    case BinaryOp::ge: return ">=";
  }
  return "?";
}

std::string_view name(Builtin fn) noexcept {
  switch (fn) {
    case Builtin::expit: return "expit";
    case Builtin::indicator: return "indicator";
    case Builtin::min: return "min";
    case Builtin::max: return "max";
  }
  return "?";
}

std::size_t arity(Builtin fn) noexcept {
  return (fn == Builtin::min || fn == Builtin::max) ? 2 : 1;
}

namespace {

constexpr std::array kBuiltins{Builtin::expit, Builtin::indicator, Builtin::min, Builtin::max};

std::optional<Builtin> builtin_by_name(std::string_view s) {
  for (auto b : kBuiltins) {
    if (name(b) == s) return b;
  }
  return std::nullopt;
}

// ---- lexer ----------------------------------------------------------------

enum class Tok {
  number, ident, kw_param, kw_var, kw_fun, kw_in, kw_binary,
  semicolon, equals, lbracket, rbracket, comma, lparen, rparen,
  plus, minus, star, slash, caret, lt, le, gt, ge, end
};

struct Token {
  Tok type = Tok::end;
  std::string text;
  double number = 0.0;
  SourcePos pos;
};

std::string describe(const Token& t) {
  if (t.type == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  int col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = {line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      t.text = std::string(src.substr(i, j - i));
      if (t.text == "param") t.type = Tok::kw_param;
      else if (t.text == "var") t.type = Tok::kw_var;
      else if (t.text == "fun") t.type = Tok::kw_fun;
      else if (t.text == "in") t.type = Tok::kw_in;
      else if (t.text == "binary") t.type = Tok::kw_binary;
      else t.type = Tok::ident;
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          while (k < src.size() && is_digit(src[k])) ++k;
          j = k;
        } else {
          throw ParseError(ParseErrorKind::lexical, t.pos, "malformed exponent in number literal");
        }
      }
      if (j < src.size() && is_ident_start(src[j])) {
        throw ParseError(ParseErrorKind::lexical, t.pos,
                         "identifier characters directly after number literal");
      }
      t.type = Tok::number;
      t.text = std::string(src.substr(i, j - i));
      const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (res.ec != std::errc() || !std::isfinite(t.number)) {
        throw ParseError(ParseErrorKind::lexical, t.pos,
                         "number literal '" + t.text + "' is out of range");
      }
      advance(j - i);
      out.push_back(std::move(t));
      continue;
    }
    auto single = [&](Tok type, std::size_t len) {
      t.type = type;
      t.text = std::string(src.substr(i, len));
      advance(len);
      out.push_back(std::move(t));
    };
    switch (c) {
      case ';': single(Tok::semicolon, 1); break;
      case '=': single(Tok::equals, 1); break;
      case '[': single(Tok::lbracket, 1); break;
      case ']': single(Tok::rbracket, 1); break;
      case ',': single(Tok::comma, 1); break;
      case '(': single(Tok::lparen, 1); break;
      case ')': single(Tok::rparen, 1); break;
      case '+': single(Tok::plus, 1); break;
      case '-': single(Tok::minus, 1); break;
      case '*': single(Tok::star, 1); break;
      case '/': single(Tok::slash, 1); break;
      case '^': single(Tok::caret, 1); break;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '=') single(Tok::le, 2);
        else single(Tok::lt, 1);
        break;
      case '>':
        if (i + 1 < src.size() && src[i + 1] == '=') single(Tok::ge, 2);
        else single(Tok::gt, 1);
        break;
      default: {
        const auto byte = static_cast<unsigned char>(c);
        std::string shown = byte < 0x80 ? std::string(1, c) : "byte 0x" + [&] {
          const char* hex = "0123456789abcdef";
          return std::string{hex[byte >> 4], hex[byte & 0xF]};
        }();
        throw ParseError(ParseErrorKind::lexical, t.pos, "unexpected character " + shown);
      }
    }
  }
  Token end;
  end.type = Tok::end;
  end.pos = {line, col};
  out.push_back(end);
  return out;
}

// ---- raw syntax tree (names unresolved) -------------------------------------

struct Raw;
using RawPtr = std::unique_ptr<Raw>;
struct Raw {
  enum class Kind { number, ident, call, negate, binary } kind = Kind::number;
  double number = 0.0;
  std::string name;
  BinaryOp op = BinaryOp::add;
  std::vector<RawPtr> children;
  SourcePos pos;
};

struct RawFun {
  std::string name;
  std::vector<std::pair<std::string, SourcePos>> args;
  RawPtr body;
  SourcePos pos;
};

}  // namespace

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  ModelSpec run() {
    while (peek().type != Tok::end) statement();
    resolve();
    return std::move(spec_);
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool accept(Tok t) {
    if (peek().type == t) {
      ++pos_;
      return true;
    }
    return false;
  }
  const Token& expect(Tok t, const char* what) {
    if (peek().type != t) {
      throw ParseError(ParseErrorKind::syntax, peek().pos,
                       std::string("expected ") + what + ", found " + describe(peek()));
    }
    return take();
  }

  void declare(const std::string& name, SourcePos pos) {
    if (builtin_by_name(name)) {
      throw ParseError(ParseErrorKind::duplicate_name, pos,
                       "'" + name + "' is a built-in function name");
    }
    if (!names_.insert(name).second) {
      throw ParseError(ParseErrorKind::duplicate_name, pos, "'" + name + "' is already declared");
    }
  }

  double signed_number() {
    const bool neg = accept(Tok::minus);
    const Token& t = expect(Tok::number, "number");
    return neg ? -t.number : t.number;
  }

  Interval interval() {
    const SourcePos at = expect(Tok::lbracket, "'['").pos;
    const double lo = signed_number();
    expect(Tok::comma, "','");
    const double hi = signed_number();
    expect(Tok::rbracket, "']'");
    if (lo > hi) {
      throw ParseError(ParseErrorKind::syntax, at, "interval lower end exceeds upper end");
    }
    return Interval(lo, hi);
  }

  void statement() {
    const Token& kw = take();
    switch (kw.type) {
      case Tok::kw_param: {
        const Token& id = expect(Tok::ident, "parameter name");
        declare(id.text, id.pos);
        ParamDecl d;
        d.name = id.text;
        d.pos = id.pos;
        if (accept(Tok::equals)) {
          d.kind = signed_number();
        } else if (accept(Tok::kw_in)) {
          d.kind = interval();
        } else {
          throw ParseError(ParseErrorKind::syntax, peek().pos,
                           "expected '=' or 'in' after parameter name, found " + describe(peek()));
        }
        expect(Tok::semicolon, "';'");
        spec_.params_.push_back(std::move(d));
        return;
      }
      case Tok::kw_var: {
        const Token& id = expect(Tok::ident, "variable name");
        declare(id.text, id.pos);
        VarDecl d;
        d.name = id.text;
        d.pos = id.pos;
        expect(Tok::kw_in, "'in'");
        if (!accept(Tok::kw_binary)) d.range = interval();
        expect(Tok::semicolon, "';'");
        spec_.vars_.push_back(std::move(d));
        return;
      }
      case Tok::kw_fun: {
        const Token& id = expect(Tok::ident, "function name");
        declare(id.text, id.pos);
        RawFun f;
        f.name = id.text;
        f.pos = id.pos;
        expect(Tok::lparen, "'('");
        if (peek().type != Tok::rparen) {
          do {
            const Token& arg = expect(Tok::ident, "argument name");
            f.args.emplace_back(arg.text, arg.pos);
          } while (accept(Tok::comma));
        }
        expect(Tok::rparen, "')'");
        expect(Tok::equals, "'='");
        f.body = expr();
        expect(Tok::semicolon, "';'");
        raw_funs_.push_back(std::move(f));
        return;
      }
      default:
        throw ParseError(ParseErrorKind::syntax, kw.pos,
                         "expected 'param', 'var' or 'fun', found " + describe(kw));
    }
  }

  static std::optional<BinaryOp> cmp_op(Tok t) {
    switch (t) {
      case Tok::lt: return BinaryOp::lt;
      case Tok::le: return BinaryOp::le;
      case Tok::gt: return BinaryOp::gt;
      case Tok::ge: return BinaryOp::ge;
      default: return std::nullopt;
    }
  }

  static RawPtr binary(BinaryOp op, RawPtr lhs, RawPtr rhs, SourcePos pos) {
    auto r = std::make_unique<Raw>();
    r->kind = Raw::Kind::binary;
    r->op = op;
    r->pos = pos;
    r->children.push_back(std::move(lhs));
    r->children.push_back(std::move(rhs));
    return r;
  }

  RawPtr expr() {
    RawPtr lhs = sum();
    if (auto op = cmp_op(peek().type)) {
      const SourcePos at = take().pos;
      RawPtr rhs = sum();
      if (cmp_op(peek().type)) {
        throw ParseError(ParseErrorKind::syntax, peek().pos,
                         "chained comparisons are not allowed; parenthesize explicitly");
      }
      return binary(*op, std::move(lhs), std::move(rhs), at);
    }
    return lhs;
  }

  RawPtr sum() {
    RawPtr lhs = prod();
    while (peek().type == Tok::plus || peek().type == Tok::minus) {
      const Token& t = take();
      lhs = binary(t.type == Tok::plus ? BinaryOp::add : BinaryOp::sub, std::move(lhs), prod(),
                   t.pos);
    }
    return lhs;
  }

  RawPtr prod() {
    RawPtr lhs = power();
    while (peek().type == Tok::star || peek().type == Tok::slash) {
      const Token& t = take();
      lhs = binary(t.type == Tok::star ? BinaryOp::mul : BinaryOp::div, std::move(lhs), power(),
                   t.pos);
    }
    return lhs;
  }

  RawPtr power() {
    RawPtr base = unary();
    if (peek().type == Tok::caret) {
      const SourcePos at = take().pos;
      RawPtr exponent = power();
      if (base->kind == Raw::Kind::number && base->number == 0.0 &&
          exponent->kind == Raw::Kind::number && exponent->number == 0.0) {
        spec_.warnings_.push_back(std::to_string(at.line) + ":" + std::to_string(at.column) +
                                  ": 0^0 is defined as 1");
      }
      return binary(BinaryOp::pow, std::move(base), std::move(exponent), at);
    }
    return base;
  }

  RawPtr unary() {
    if (peek().type == Tok::minus) {
      auto r = std::make_unique<Raw>();
      r->kind = Raw::Kind::negate;
      r->pos = take().pos;
      r->children.push_back(atom());
      return r;
    }
    return atom();
  }

  RawPtr atom() {
    const Token& t = take();
    auto r = std::make_unique<Raw>();
    r->pos = t.pos;
    switch (t.type) {
      case Tok::number:
        r->kind = Raw::Kind::number;
        r->number = t.number;
        return r;
      case Tok::ident:
        r->name = t.text;
        if (accept(Tok::lparen)) {
          r->kind = Raw::Kind::call;
          if (peek().type != Tok::rparen) {
            do {
              r->children.push_back(expr());
            } while (accept(Tok::comma));
          }
          expect(Tok::rparen, "')'");
        } else {
          r->kind = Raw::Kind::ident;
        }
        return r;
      case Tok::lparen: {
        RawPtr inner = expr();
        expect(Tok::rparen, "')'");
        return inner;
      }
      default:
        throw ParseError(ParseErrorKind::syntax, t.pos, "expected an expression, found " + describe(t));
    }
  }

  // ---- resolution ---------------------------------------------------------

  struct Scope {
    const RawFun* fun = nullptr;
    std::size_t fun_index = 0;
  };

  ExprPtr resolve_expr(const Raw& r, const Scope& scope) {
    auto e = std::make_shared<Expr>();
    e->pos = r.pos;
    switch (r.kind) {
      case Raw::Kind::number:
        e->node = NumberLit{r.number};
        break;
      case Raw::Kind::negate:
        e->node = Negate{resolve_expr(*r.children[0], scope)};
        break;
      case Raw::Kind::binary:
        e->node = BinaryExpr{r.op, resolve_expr(*r.children[0], scope),
                             resolve_expr(*r.children[1], scope)};
        break;
      case Raw::Kind::ident: {
        const auto& args = scope.fun->args;
        for (std::size_t k = 0; k < args.size(); ++k) {
          if (args[k].first == r.name) {
            e->node = Ref{Ref::Kind::arg, r.name, k};
            return e;
          }
        }
        if (auto p = spec_.find_param(r.name)) {
          e->node = Ref{Ref::Kind::param, r.name, *p};
        } else if (auto v = spec_.find_var(r.name)) {
          e->node = Ref{Ref::Kind::var, r.name, *v};
        } else if (builtin_by_name(r.name) || fun_index_.count(r.name)) {
          throw ParseError(ParseErrorKind::unresolved_identifier, r.pos,
                           "'" + r.name + "' is a function and must be called with arguments");
        } else {
          throw ParseError(ParseErrorKind::unresolved_identifier, r.pos,
                           "unknown identifier '" + r.name + "'");
        }
        break;
      }
      case Raw::Kind::call: {
        std::vector<ExprPtr> args;
        args.reserve(r.children.size());
        if (auto b = builtin_by_name(r.name)) {
          if (r.children.size() != arity(*b)) {
            throw ParseError(ParseErrorKind::arity, r.pos,
                             std::string(name(*b)) + " takes " + std::to_string(arity(*b)) +
                                 " argument(s), got " + std::to_string(r.children.size()));
          }
          for (const auto& c : r.children) args.push_back(resolve_expr(*c, scope));
          e->node = BuiltinCall{*b, std::move(args)};
          break;
        }
        const auto it = fun_index_.find(r.name);
        if (it == fun_index_.end()) {
          const bool is_value = spec_.find_param(r.name) || spec_.find_var(r.name) ||
                                std::any_of(scope.fun->args.begin(), scope.fun->args.end(),
                                            [&](const auto& a) { return a.first == r.name; });
          throw ParseError(ParseErrorKind::unresolved_identifier, r.pos,
                           is_value ? "'" + r.name + "' is not a function"
                                    : "unknown function '" + r.name + "'");
        }
        if (it->second >= scope.fun_index) {
          throw ParseError(ParseErrorKind::unresolved_identifier, r.pos,
                           it->second == scope.fun_index
                               ? "function '" + r.name + "' may not call itself"
                               : "function '" + r.name + "' is used before its declaration");
        }
        const std::size_t expected = raw_funs_[it->second].args.size();
        if (r.children.size() != expected) {
          throw ParseError(ParseErrorKind::arity, r.pos,
                           "function '" + r.name + "' takes " + std::to_string(expected) +
                               " argument(s), got " + std::to_string(r.children.size()));
        }
        for (const auto& c : r.children) args.push_back(resolve_expr(*c, scope));
        e->node = FunCall{r.name, it->second, std::move(args)};
        break;
      }
    }
    return e;
  }

  void resolve() {
    for (std::size_t k = 0; k < raw_funs_.size(); ++k) fun_index_[raw_funs_[k].name] = k;
    for (std::size_t k = 0; k < raw_funs_.size(); ++k) {
      const RawFun& f = raw_funs_[k];
      std::set<std::string> seen;
      for (const auto& [arg, pos] : f.args) {
        if (!seen.insert(arg).second) {
          throw ParseError(ParseErrorKind::duplicate_name, pos,
                           "argument '" + arg + "' repeated in function '" + f.name + "'");
        }
        if (builtin_by_name(arg) || fun_index_.count(arg) || spec_.find_param(arg)) {
          throw ParseError(ParseErrorKind::duplicate_name, pos,
                           "argument '" + arg + "' clashes with a declared name");
        }
      }
      FunDecl d;
      d.name = f.name;
      d.pos = f.pos;
      for (const auto& a : f.args) d.args.push_back(a.first);
      d.body = resolve_expr(*f.body, Scope{&f, k});
      spec_.funs_.push_back(std::move(d));
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::set<std::string> names_;
  std::vector<RawFun> raw_funs_;
  std::unordered_map<std::string, std::size_t> fun_index_;
  ModelSpec spec_;
};

std::optional<std::size_t> ModelSpec::find_param(std::string_view n) const {
  for (std::size_t k = 0; k < params_.size(); ++k) {
    if (params_[k].name == n) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> ModelSpec::find_var(std::string_view n) const {
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (vars_[k].name == n) return k;
  }
  return std::nullopt;
}

std::optional<std::size_t> ModelSpec::find_fun(std::string_view n) const {
  for (std::size_t k = 0; k < funs_.size(); ++k) {
    if (funs_[k].name == n) return k;
  }
  return std::nullopt;
}

ModelSpec parse_model(std::string_view source) { return Parser(source).run(); }

// ---- printing ---------------------------------------------------------------

namespace {

std::string number_text(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print_expr(const Expr& e, std::string& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          out += number_text(n.value);
        } else if constexpr (std::is_same_v<T, Ref>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Negate>) {
          out += "-(";
          print_expr(*n.operand, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          out += "(";
          print_expr(*n.lhs, out);
          out += " ";
          out += symbol(n.op);
          out += " ";
          print_expr(*n.rhs, out);
          out += ")";
        } else {
          if constexpr (std::is_same_v<T, BuiltinCall>) out += name(n.fn);
          else out += n.name;
          out += "(";
          for (std::size_t k = 0; k < n.args.size(); ++k) {
            if (k) out += ", ";
            print_expr(*n.args[k], out);
          }
          out += ")";
        }
      },
      e.node);
}

std::string interval_text(const Interval& iv) {
  return "[" + number_text(iv.lo()) + ", " + number_text(iv.hi()) + "]";
}

bool args_equal(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!structurally_equal(*a[k], *b[k])) return false;
  }
  return true;
}

}  // namespace

std::string to_source(const ModelSpec& spec) {
  std::string out;
  for (const auto& p : spec.params()) {
    out += "param " + p.name;
    out += p.is_fixed() ? " = " + number_text(p.fixed_value()) : " in " + interval_text(p.range());
    out += ";\n";
  }
  for (const auto& v : spec.vars()) {
    out += "var " + v.name + " in " + (v.is_binary() ? std::string("binary") : interval_text(*v.range));
    out += ";\n";
  }
  for (const auto& f : spec.funs()) {
    out += "fun " + f.name + "(";
    for (std::size_t k = 0; k < f.args.size(); ++k) {
      if (k) out += ", ";
      out += f.args[k];
    }
    out += ") = ";
    print_expr(*f.body, out);
    out += ";\n";
  }
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, NumberLit>) {
          return na.value == nb.value;
        } else if constexpr (std::is_same_v<T, Ref>) {
          return na.kind == nb.kind && na.name == nb.name && na.index == nb.index;
        } else if constexpr (std::is_same_v<T, Negate>) {
          return structurally_equal(*na.operand, *nb.operand);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return na.op == nb.op && structurally_equal(*na.lhs, *nb.lhs) &&
                 structurally_equal(*na.rhs, *nb.rhs);
        } else if constexpr (std::is_same_v<T, BuiltinCall>) {
          return na.fn == nb.fn && args_equal(na.args, nb.args);
        } else {
          return na.name == nb.name && na.index == nb.index && args_equal(na.args, nb.args);
        }
      },
      a.node);
}

bool structurally_equal(const ModelSpec& a, const ModelSpec& b) {
  if (a.params().size() != b.params().size() || a.vars().size() != b.vars().size() ||
      a.funs().size() != b.funs().size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.params().size(); ++k) {
    const auto& pa = a.params()[k];
    const auto& pb = b.params()[k];
    if (pa.name != pb.name || pa.kind != pb.kind) return false;
  }
  for (std::size_t k = 0; k < a.vars().size(); ++k) {
    if (a.vars()[k].name != b.vars()[k].name || a.vars()[k].range != b.vars()[k].range) return false;
  }
  for (std::size_t k = 0; k < a.funs().size(); ++k) {
    const auto& fa = a.funs()[k];
    const auto& fb = b.funs()[k];
    if (fa.name != fb.name || fa.args != fb.args || !structurally_equal(*fa.body, *fb.body)) {
      return false;
    }
  }
  return true;
}

std::vector<NamedInterval> free_range_params(const ModelSpec& spec) {
  std::vector<NamedInterval> out;
  for (const auto& p : spec.params()) {
    if (!p.is_fixed()) out.push_back({p.name, p.range()});
  }
  return out;
}

}  // namespace causalbounds::dsl
