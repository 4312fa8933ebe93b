#include "causalbounds/mech_bounds.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace causalbounds {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

std::size_t require_fun(const dsl::ModelSpec& spec, const std::string& name, std::size_t arity) {
  const auto idx = spec.find_fun(name);
  if (!idx) throw DomainError("model declares no function '" + name + "'");
  const auto got = spec.funs()[*idx].args.size();
  if (got != arity) {
    throw DomainError("function '" + name + "' must take " + std::to_string(arity) +
                      " argument(s), declared with " + std::to_string(got));
  }
  return *idx;
}

}  // namespace

MediatorMechanism::MediatorMechanism(dsl::ModelSpec spec, std::string g_name, std::string h_name)
    : spec_(std::move(spec)), g_name_(std::move(g_name)), h_name_(std::move(h_name)) {
  g_index_ = require_fun(spec_, g_name_, 1);
  h_index_ = require_fun(spec_, h_name_, 2);
}

double MediatorMechanism::checked(std::size_t fun, std::span<const double> args,
                                  const dsl::SlotBinding& b) const {
  const double v = dsl::evaluate(spec_, fun, args, b);
  if (!(v >= 0.0 && v <= 1.0)) {
    const auto& f = spec_.funs()[fun];
    std::string call = f.name + "(";
    for (std::size_t k = 0; k < args.size(); ++k) call += (k ? ", " : "") + num(args[k]);
    call += ")";
    throw ModelConstraintError(call + " = " + num(v) + " is not a probability", f.name, v);
  }
  return v;
}

double MediatorMechanism::mu_bar(Arm a, const dsl::SlotBinding& binding) const {
  const double av = to_int(a);
  const std::array<double, 1> g_args{av};
  const double g = checked(g_index_, g_args, binding);
  const std::array<double, 2> h1_args{av, 1.0};
  const std::array<double, 2> h0_args{av, 0.0};
  const double h1 = checked(h_index_, h1_args, binding);
  const double h0 = checked(h_index_, h0_args, binding);
  return h1 * g + h0 * (1.0 - g);
}

double MediatorMechanism::psi_bar(const dsl::SlotBinding& binding) const {
  return mu_bar(Arm::treated, binding) - mu_bar(Arm::control, binding);
}

double mu_bar(const MediatorMechanism& mech, Arm a, const dsl::Binding& binding) {
  return mech.mu_bar(a, dsl::SlotBinding::resolve(mech.spec(), binding));
}

double psi_bar(const MediatorMechanism& mech, const dsl::Binding& binding) {
  return mech.psi_bar(dsl::SlotBinding::resolve(mech.spec(), binding));
}

BoundsResult bound_psi_over(const MediatorMechanism& mech, std::span<const NamedInterval> dims,
                            const SearchConfig& cfg) {
  const auto& spec = mech.spec();
  std::vector<std::size_t> slots;
  slots.reserve(dims.size());
  for (const auto& d : dims) {
    const auto idx = spec.find_param(d.name);
    if (!idx) throw DomainError("search dimension '" + d.name + "' is not a model parameter");
    slots.push_back(*idx);
  }

  dsl::SlotBinding binding = dsl::SlotBinding::defaults(spec);
  auto objective = [&](std::span<const double> x) {
    for (std::size_t k = 0; k < slots.size(); ++k) binding.set_param(slots[k], x[k]);
    return mech.psi_bar(binding);
  };
  const BoxSearchResult s = search_box(objective, dims, cfg);

  auto to_point = [&](const std::vector<double>& x) {
    dsl::SlotBinding b = dsl::SlotBinding::defaults(spec);
    for (std::size_t k = 0; k < slots.size(); ++k) b.set_param(slots[k], x[k]);
    return b.to_point(spec);
  };

  BoundsResult r;
  r.interval = Interval(s.min, s.max);
  r.kind = s.degenerate ? IdentificationKind::point : IdentificationKind::partial;
  if (s.degenerate) r.interval = Interval(s.min, s.min);
  r.argmin = to_point(s.argmin);
  r.argmax = to_point(s.argmax);
  r.diagnostics.evaluations = s.evaluations;
  r.diagnostics.method = s.refined ? "grid+nelder-mead" : "grid";
  r.diagnostics.constraint_violations = s.violations;
  for (const auto& v : s.violation_samples) r.diagnostics.notes.push_back("constraint violation: " + v);
  r.components = {{"grid_evaluations", static_cast<double>(s.grid_evaluations)}};
  return r;
}

BoundsResult bound_psi(const MediatorMechanism& mech, const SearchConfig& cfg) {
  const auto dims = dsl::free_range_params(mech.spec());
  return bound_psi_over(mech, dims, cfg);
}

VacuousnessReport check_vacuous(const MediatorMechanism& mech, double magnitude_cap,
                                const SearchConfig& cfg) {
  if (!(magnitude_cap > 0.0) || !std::isfinite(magnitude_cap)) {
    throw DomainError("magnitude cap must be a positive finite number");
  }
  VacuousnessReport rep;
  rep.cap = magnitude_cap;
  for (const auto& d : dsl::free_range_params(mech.spec())) {
    const double lo = d.range.lo() >= 0.0 ? 0.0 : -magnitude_cap;
    rep.widened_box.push_back({d.name, Interval(lo, magnitude_cap)});
  }
  rep.search = bound_psi_over(mech, rep.widened_box, cfg);
  rep.sup = rep.search.interval.hi();
  rep.inf = rep.search.interval.lo();
  rep.vacuous = rep.sup >= 1.0 - rep.epsilon && rep.inf <= -1.0 + rep.epsilon;
  rep.search.kind = rep.vacuous ? IdentificationKind::vacuous_parameter_space
                                : (rep.search.interval.degenerate() && rep.widened_box.empty()
                                       ? IdentificationKind::point
                                       : IdentificationKind::partial);
  std::ostringstream os;
  os << (rep.vacuous ? "vacuous" : "non-vacuous") << " (eps=" << rep.epsilon << "): psi-bar spans ["
     << num(rep.inf) << ", " << num(rep.sup) << "] with range parameters widened to magnitude "
     << num(magnitude_cap) << "; certified only up to this cap and tolerance";
  rep.statement = os.str();
  rep.search.diagnostics.notes.push_back(rep.statement);
  return rep;
}

}  // namespace causalbounds
