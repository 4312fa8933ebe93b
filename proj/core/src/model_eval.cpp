#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "causalbounds/model_dsl.hpp"

namespace causalbounds::dsl {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string at(const SourcePos& p) {
  return " at " + std::to_string(p.line) + ":" + std::to_string(p.column);
}

class Evaluator {
 public:
  Evaluator(const ModelSpec& spec, const SlotBinding& binding) : spec_(spec), binding_(binding) {}

  double call(std::size_t fun_index, std::span<const double> args) const {
    return eval(*spec_.funs()[fun_index].body, args);
  }

 private:
  double eval(const Expr& e, std::span<const double> args) const {
    switch (e.node.index()) {
      case 0:
        return std::get<NumberLit>(e.node).value;
      case 1: {
        const auto& r = std::get<Ref>(e.node);
        switch (r.kind) {
          case Ref::Kind::arg: return args[r.index];
          case Ref::Kind::param: return binding_.params()[r.index];
          case Ref::Kind::var:
            if (!binding_.var_bound(r.index)) {
              throw BindingError("variable '" + r.name + "' is not bound" + at(e.pos));
            }
            return binding_.var(r.index);
        }
        return 0.0;
      }
      case 2:
        return -eval(*std::get<Negate>(e.node).operand, args);
      case 3:
        return binary(std::get<BinaryExpr>(e.node), e.pos, args);
      case 4: {
        const auto& c = std::get<BuiltinCall>(e.node);
        const double x = eval(*c.args[0], args);
        switch (c.fn) {
          case Builtin::expit: return safe_expit(x);
          case Builtin::indicator: return x > 0.0 ? 1.0 : 0.0;
          case Builtin::min: return std::min(x, eval(*c.args[1], args));
          case Builtin::max: return std::max(x, eval(*c.args[1], args));
        }
        return 0.0;
      }
      default: {
        const auto& c = std::get<FunCall>(e.node);
        constexpr std::size_t kInline = 8;
        if (c.args.size() <= kInline) {
          std::array<double, kInline> buf{};
          for (std::size_t k = 0; k < c.args.size(); ++k) buf[k] = eval(*c.args[k], args);
          return call(c.index, std::span<const double>(buf.data(), c.args.size()));
        }
        std::vector<double> buf(c.args.size());
        for (std::size_t k = 0; k < c.args.size(); ++k) buf[k] = eval(*c.args[k], args);
        return call(c.index, buf);
      }
    }
  }

  double binary(const BinaryExpr& b, const SourcePos& pos, std::span<const double> args) const {
    const double x = eval(*b.lhs, args);
    const double y = eval(*b.rhs, args);
    double r = 0.0;
    switch (b.op) {
      case BinaryOp::add: r = x + y; break;
      case BinaryOp::sub: r = x - y; break;
      case BinaryOp::mul: r = x * y; break;
      case BinaryOp::div:
        if (y == 0.0) {
          throw EvaluationError("division by zero: " + num(x) + " / " + num(y) + at(pos));
        }
        r = x / y;
        break;
      case BinaryOp::pow: r = (x == 0.0 && y == 0.0) ? 1.0 : std::pow(x, y); break;
      case BinaryOp::lt: return x < y ? 1.0 : 0.0;
      case BinaryOp::le: return x <= y ? 1.0 : 0.0;
      case BinaryOp::gt: return x > y ? 1.0 : 0.0;
      case BinaryOp::ge: return x >= y ? 1.0 : 0.0;
    }
    if (!std::isfinite(r)) {
      throw EvaluationError("non-finite result: " + num(x) + " " + std::string(symbol(b.op)) +
                            " " + num(y) + at(pos));
    }
    return r;
  }

  const ModelSpec& spec_;
  const SlotBinding& binding_;
};

}  // namespace

double safe_expit(double x) noexcept {
  constexpr double kLow = std::numeric_limits<double>::denorm_min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  double p = 0.0;
  if (x >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kLow, kHigh);
}

SlotBinding SlotBinding::defaults(const ModelSpec& spec) {
  SlotBinding b;
  b.params_.reserve(spec.params().size());
  for (const auto& p : spec.params()) {
    b.params_.push_back(p.is_fixed() ? p.fixed_value() : p.range().lo());
  }
  b.vars_.assign(spec.vars().size(), 0.0);
  b.var_bound_.assign(spec.vars().size(), false);
  return b;
}

SlotBinding SlotBinding::resolve(const ModelSpec& spec, const Binding& binding) {
  SlotBinding b = defaults(spec);
  for (const auto& [key, value] : binding) {
    if (!spec.find_param(key) && !spec.find_var(key)) {
      throw BindingError("binding names '" + key + "', which is neither a parameter nor a variable");
    }
  }
  for (std::size_t k = 0; k < spec.params().size(); ++k) {
    const auto& p = spec.params()[k];
    const auto it = binding.find(p.name);
    if (it == binding.end()) throw BindingError("parameter '" + p.name + "' is not bound");
    const double v = it->second;
    if (p.is_fixed()) {
      if (v != p.fixed_value()) {
        throw BindingError("fixed parameter '" + p.name + "' must be " + num(p.fixed_value()) +
                           ", got " + num(v));
      }
    } else if (!p.range().contains(v)) {
      throw BindingError("parameter '" + p.name + "' = " + num(v) + " lies outside [" +
                         num(p.range().lo()) + ", " + num(p.range().hi()) + "]");
    }
    b.params_[k] = v;
  }
  for (std::size_t k = 0; k < spec.vars().size(); ++k) {
    const auto& d = spec.vars()[k];
    const auto it = binding.find(d.name);
    if (it == binding.end()) continue;
    const double v = it->second;
    if (d.is_binary() ? (v != 0.0 && v != 1.0) : !d.range->contains(v)) {
      throw BindingError("variable '" + d.name + "' = " + num(v) + " is outside its domain");
    }
    b.vars_[k] = v;
    b.var_bound_[k] = true;
  }
  return b;
}

ParamPoint SlotBinding::to_point(const ModelSpec& spec) const {
  ParamPoint out;
  for (std::size_t k = 0; k < spec.params().size(); ++k) {
    out.emplace_back(spec.params()[k].name, params_[k]);
  }
  for (std::size_t k = 0; k < spec.vars().size(); ++k) {
    if (var_bound_[k]) out.emplace_back(spec.vars()[k].name, vars_[k]);
  }
  return out;
}

double evaluate(const ModelSpec& spec, std::size_t fun_index, std::span<const double> args,
                const SlotBinding& binding) {
  if (fun_index >= spec.funs().size()) throw DomainError("function index out of range");
  const auto& f = spec.funs()[fun_index];
  if (args.size() != f.args.size()) {
    throw DomainError("function '" + f.name + "' takes " + std::to_string(f.args.size()) +
                      " argument(s), got " + std::to_string(args.size()));
  }
  return Evaluator(spec, binding).call(fun_index, args);
}

double evaluate(const ModelSpec& spec, std::string_view fun_name, std::span<const double> args,
                const Binding& binding) {
  const auto idx = spec.find_fun(fun_name);
  if (!idx) throw DomainError("no function named '" + std::string(fun_name) + "'");
  return evaluate(spec, *idx, args, SlotBinding::resolve(spec, binding));
}

}  // namespace causalbounds::dsl
