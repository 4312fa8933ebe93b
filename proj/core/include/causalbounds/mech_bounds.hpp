#pragma once

#include <string>

#include "causalbounds/box_search.hpp"
#include "causalbounds/model_dsl.hpp"
#include "causalbounds/probability.hpp"

namespace causalbounds {

/// A -> M -> Y mechanism with binary mediator: g(a) = Pr(M=1 | A=a) and
/// h(a, m) = Pr(Y=1 | M=m, A=a), both declared in a model spec.
class MediatorMechanism {
 public:
  /// Throws DomainError if g (arity 1) or h (arity 2) is missing.
  explicit MediatorMechanism(dsl::ModelSpec spec, std::string g_name = "g",
                             std::string h_name = "h");

  const dsl::ModelSpec& spec() const noexcept { return spec_; }
  const std::string& g_name() const noexcept { return g_name_; }
  const std::string& h_name() const noexcept { return h_name_; }

  /// h(a,1) g(a) + h(a,0) (1 - g(a)). Throws ModelConstraintError when g or h
  /// leaves [0,1].
  double mu_bar(Arm a, const dsl::SlotBinding& binding) const;
  double psi_bar(const dsl::SlotBinding& binding) const;

 private:
  double checked(std::size_t fun, std::span<const double> args, const dsl::SlotBinding& b) const;

  dsl::ModelSpec spec_;
  std::string g_name_;
  std::string h_name_;
  std::size_t g_index_ = 0;
  std::size_t h_index_ = 0;
};

double mu_bar(const MediatorMechanism& mech, Arm a, const dsl::Binding& binding);
double psi_bar(const MediatorMechanism& mech, const dsl::Binding& binding);

/// Bounds on psi-bar over the box of the spec's range parameters (fixed
/// parameters held at their values). kind=point when the box is degenerate.
BoundsResult bound_psi(const MediatorMechanism& mech, const SearchConfig& cfg);

/// Same search over explicitly supplied dimensions (names must be range or
/// fixed parameters of the spec); used for widened boxes.
BoundsResult bound_psi_over(const MediatorMechanism& mech, std::span<const NamedInterval> dims,
                            const SearchConfig& cfg);

inline constexpr double kVacuousEpsilon = 0.01;

struct VacuousnessReport {
  bool vacuous = false;
  double sup = 0.0;
  double inf = 0.0;
  double epsilon = kVacuousEpsilon;
  double cap = 0.0;
  std::vector<NamedInterval> widened_box;
  /// Underlying search over the widened box; kind reflects the verdict.
  BoundsResult search;
  std::string statement;
};

/// Widens every range parameter to [-cap, cap] (or [0, cap] when its declared
/// range is nonnegative) and checks whether psi-bar comes within epsilon of
/// both -1 and 1. Certified only up to the cap and epsilon.
VacuousnessReport check_vacuous(const MediatorMechanism& mech, double magnitude_cap,
                                const SearchConfig& cfg);

}  // namespace causalbounds
