#include "causalbounds/stat_identify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace causalbounds {

namespace {

constexpr const char* kCfTreatedUntreated = "Pr(Y^1=1|A=0)";
constexpr const char* kCfControlTreated = "Pr(Y^0=1|A=1)";

}  // namespace

Interval manski_mu_bounds(const BinaryJointTable& t, Arm a) {
  const double observed = t.joint(1, a);
  return Interval(observed, observed + marginal_a(t, other(a)));
}

BoundsResult manski_ace_bounds(const BinaryJointTable& t) {
  const Interval mu1 = manski_mu_bounds(t, Arm::treated);
  const Interval mu0 = manski_mu_bounds(t, Arm::control);

  BoundsResult r;
  // mu1 - mu0 in interval arithmetic, expressed through the joint entries.
  // With counts, each end is one integer ratio and so correctly rounded.
  if (const auto& c = t.counts()) {
    const auto n = static_cast<double>(c->total());
    r.interval = Interval(-static_cast<double>(c->n01 + c->n10) / n, static_cast<double>(c->n11 + c->n00) / n);
  } else {
    r.interval = Interval(-t.p01() - t.p10(), t.p11() + t.p00());
  }
  r.kind = IdentificationKind::partial;
  r.argmin = ParamPoint{{kCfTreatedUntreated, 0.0}, {kCfControlTreated, 1.0}};
  r.argmax = ParamPoint{{kCfTreatedUntreated, 1.0}, {kCfControlTreated, 0.0}};
  r.diagnostics.evaluations = 1;
  r.diagnostics.method = "manski-closed-form";
  r.components = {{"mu1_lo", mu1.lo()}, {"mu1_hi", mu1.hi()}, {"mu0_lo", mu0.lo()},
                  {"mu0_hi", mu0.hi()}};
  return r;
}

Interval manski_oracle(const BinaryJointTable& t, double grid_step) {
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw DomainError("grid_step must lie in (0, 0.1]");
  }
  const auto n = static_cast<long>(std::ceil(1.0 / grid_step - 1e-9));
  const double pa1 = marginal_a(t, Arm::treated);
  const double pa0 = marginal_a(t, Arm::control);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (long i = 0; i <= n; ++i) {
    const double q1 = static_cast<double>(i) / static_cast<double>(n);  // Pr(Y^1=1 | A=0)
    const double mu1 = t.p11() + q1 * pa0;
    for (long j = 0; j <= n; ++j) {
      const double q0 = static_cast<double>(j) / static_cast<double>(n);  // Pr(Y^0=1 | A=1)
      const double psi = mu1 - (t.p10() + q0 * pa1);
      lo = std::min(lo, psi);
      hi = std::max(hi, psi);
    }
  }
  return Interval(lo, hi);
}

BoundsResult randomized_point_estimate(const BinaryJointTable& t) {
  const double p1 = conditional_y_given_a(t, Arm::treated);
  const double p0 = conditional_y_given_a(t, Arm::control);
  double psi = p1 - p0;
  if (const auto& c = t.counts()) {
    // (n11 n0 - n10 n1) / (n1 n0), rounded once.
    // Products are exact in the 64-bit long double mantissa below 2^64.
    const auto n1 = static_cast<long double>(c->n11 + c->n01);
    const auto n0 = static_cast<long double>(c->n10 + c->n00);
    const long double num = static_cast<long double>(c->n11) * n0 - static_cast<long double>(c->n10) * n1;
    psi = static_cast<double>(num / (n1 * n0));
  }
  BoundsResult r = point_result(psi, "randomized-contrast");
  r.components = {{"mu1", p1}, {"mu0", p0}};
  return r;
}

BoundsResult gformula_nonparametric(const StratifiedTable& s) {
  std::vector<double> terms1;
  std::vector<double> terms0;
  std::vector<std::string> notes;
  for (const auto& w : s.strata()) {
    if (w.mass == 0.0) {
      notes.push_back("dropped zero-mass stratum '" + w.label + "'");
      continue;
    }
    if (!w.has_both_arms()) {
      const char* missing = (!w.p_y1_given_a1 || (w.n_a1 && *w.n_a1 == 0)) ? "A=1" : "A=0";
      throw PositivityError("positivity violated: stratum '" + w.label + "' has no " +
                            missing + " observations");
    }
    terms1.push_back(*w.p_y1_given_a1 * w.mass);
    terms0.push_back(*w.p_y1_given_a0 * w.mass);
  }
  const double mu1 = pairwise_sum(terms1);
  const double mu0 = pairwise_sum(terms0);
  BoundsResult r = point_result(mu1 - mu0, "g-formula-nonparametric");
  r.diagnostics.evaluations = terms1.size();
  r.diagnostics.notes = std::move(notes);
  r.components = {{"mu1", mu1}, {"mu0", mu0}};
  return r;
}

}  // namespace causalbounds
