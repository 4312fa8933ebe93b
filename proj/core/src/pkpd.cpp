#include "causalbounds/pkpd.hpp"

#include <cmath>
#include <sstream>

namespace causalbounds::pkpd {

namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

void PkpdConfig::validate() const {
  if (!(dose_mg >= 0.0) || !std::isfinite(dose_mg)) throw DomainError("dose must be a nonnegative number");
  if (theta1.lo() < 0.0 || theta1.hi() > 1.0) {
    throw DomainError("theta1 range must lie in [0, 1], got [" + num(theta1.lo()) + ", " +
                      num(theta1.hi()) + "]");
  }
  if (lambda2.lo() < 0.0) throw DomainError("lambda2 range must be nonnegative");
  if (!std::isfinite(threshold)) throw DomainError("threshold must be finite");
  for (const Interval* iv : {&lambda0, &lambda1, &lambda2, &lambda3}) {
    if (!std::isfinite(iv->lo()) || !std::isfinite(iv->hi())) {
      throw DomainError("lambda ranges must be finite");
    }
  }
}

std::vector<NamedInterval> PkpdConfig::box() const {
  return {{"theta1", theta1},
          {"lambda0", lambda0},
          {"lambda1", lambda1},
          {"lambda2", lambda2},
          {"lambda3", lambda3}};
}

double WeightedEmpiricalDist::total_weight() const noexcept {
  std::vector<double> w;
  w.reserve(points.size());
  for (const auto& p : points) w.push_back(p.weight);
  return pairwise_sum(w);
}

void validate(const WeightedEmpiricalDist& dist) {
  for (std::size_t i = 0; i < dist.points.size(); ++i) {
    const auto& p = dist.points[i];
    if (!std::isfinite(p.b)) throw DomainError("point " + std::to_string(i) + " has a non-finite value");
    if (!(p.weight >= 0.0) || !std::isfinite(p.weight)) {
      throw DomainError("point " + std::to_string(i) + " has invalid weight " + num(p.weight));
    }
  }
  if (!(dist.total_weight() > 0.0)) throw DomainError("distribution weights must have a positive total");
}

WeightedEmpiricalDist truncate_renormalize(const WeightedEmpiricalDist& dist, double threshold) {
  if (dist.points.empty()) throw EmptyDataError("distribution has no points");
  validate(dist);
  const double total = dist.total_weight();
  WeightedEmpiricalDist out;
  std::vector<double> kept;
  for (const auto& p : dist.points) {
    if (p.b >= threshold) {
      out.points.push_back(p);
      kept.push_back(p.weight);
    }
  }
  const double kept_total = pairwise_sum(kept);
  if (out.points.empty() || !(kept_total > 0.0)) {
    throw EmptyDataError("no positive-weight points at or above " + num(threshold));
  }
  for (auto& p : out.points) p.weight /= kept_total;
  out.truncated_at = threshold;
  out.dropped_points = dist.points.size() - out.points.size();
  out.dropped_mass_fraction = 1.0 - kept_total / total;
  return out;
}

double effective_concentration(double theta0, double theta1) {
  if (!(theta0 >= 0.0) || !std::isfinite(theta0)) throw DomainError("dose must be nonnegative");
  if (!(theta1 >= 0.0 && theta1 <= 1.0)) {
    throw DomainError("active fraction must lie in [0, 1], got " + num(theta1));
  }
  return theta0 * theta1;
}

double sbp_at_24h(double b, Arm a, double m, const Lambda& lambda) {
  const double denom = lambda.l2 + m;
  if (denom == 0.0) {
    throw SingularityError("lambda2 + m = 0 in the E-max term (lambda2=" + num(lambda.l2) +
                           ", m=" + num(m) + ")");
  }
  const double av = to_int(a);
  return b - (lambda.l0 + av * lambda.l1 * (m / denom) + av * lambda.l3);
}

int resolved_indicator(double b, Arm a, double m, const Lambda& lambda, double threshold) {
  return sbp_at_24h(b, a, m, lambda) < threshold ? 1 : 0;
}

double mu_bar_pkpd(const WeightedEmpiricalDist& dist, Arm a, double theta1, const Lambda& lambda,
                   double dose_mg, double threshold, std::uint64_t* negative_sbp) {
  if (dist.points.empty()) throw DomainError("empty distribution");
  if (!dist.truncated_at) throw DomainError("distribution must be truncated before integration");
  const double m = effective_concentration(a == Arm::treated ? dose_mg : 0.0, theta1);
  std::vector<double> terms(dist.points.size());
  std::vector<double> weights(dist.points.size());
  for (std::size_t i = 0; i < dist.points.size(); ++i) {
    const auto& p = dist.points[i];
    const double y = sbp_at_24h(p.b, a, m, lambda);
    if (negative_sbp && y < 0.0) ++*negative_sbp;
    terms[i] = y < threshold ? p.weight : 0.0;
    weights[i] = p.weight;
  }
  const double total = pairwise_sum(weights);
  if (!(total > 0.0)) throw DomainError("distribution weights must have a positive total");
  return pairwise_sum(terms) / total;
}

BoundsResult case_bounds(const WeightedEmpiricalDist& dist, const PkpdConfig& cfg,
                         const SearchConfig& search) {
  cfg.validate();
  if (dist.points.empty()) throw DomainError("empty distribution");
  if (!dist.truncated_at) throw DomainError("distribution must be truncated before integration");

  std::uint64_t negative = 0;
  auto arms = [&](std::span<const double> x, std::uint64_t* neg) {
    const Lambda lam{x[1], x[2], x[3], x[4]};
    const double mu1 = mu_bar_pkpd(dist, Arm::treated, x[0], lam, cfg.dose_mg, cfg.threshold, neg);
    const double mu0 = mu_bar_pkpd(dist, Arm::control, x[0], lam, cfg.dose_mg, cfg.threshold, neg);
    return std::pair{mu1, mu0};
  };
  auto objective = [&](std::span<const double> x) {
    const auto [mu1, mu0] = arms(x, &negative);
    return mu1 - mu0;
  };
  const auto dims = cfg.box();
  const BoxSearchResult s = search_box(objective, dims, search);

  auto to_point = [&](const std::vector<double>& x) {
    ParamPoint p;
    for (std::size_t k = 0; k < dims.size(); ++k) p.emplace_back(dims[k].name, x[k]);
    return p;
  };
  const auto [mu1_lo, mu0_lo] = arms(s.argmin, nullptr);
  const auto [mu1_hi, mu0_hi] = arms(s.argmax, nullptr);

  BoundsResult r;
  r.interval = s.degenerate ? Interval(s.min, s.min) : Interval(s.min, s.max);
  r.kind = s.degenerate ? IdentificationKind::point : IdentificationKind::partial;
  r.argmin = to_point(s.argmin);
  r.argmax = to_point(s.argmax);
  r.diagnostics.evaluations = s.evaluations;
  r.diagnostics.method = s.refined ? "grid+nelder-mead" : "grid";
  r.diagnostics.constraint_violations = s.violations;
  if (negative > 0) {
    r.diagnostics.notes.push_back(std::to_string(negative) +
                                  " negative predicted SBP values encountered during the search");
  }
  r.components = {{"mu1_at_min", mu1_lo},
                  {"mu0_at_min", mu0_lo},
                  {"mu1_at_max", mu1_hi},
                  {"mu0_at_max", mu0_hi},
                  {"negative_sbp_count", static_cast<double>(negative)},
                  {"dropped_mass_fraction", dist.dropped_mass_fraction},
                  {"points", static_cast<double>(dist.points.size())}};
  return r;
}

}  // namespace causalbounds::pkpd
