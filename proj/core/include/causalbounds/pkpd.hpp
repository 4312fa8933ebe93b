#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "causalbounds/box_search.hpp"
#include "causalbounds/probability.hpp"

namespace causalbounds::pkpd {

/// Single-dose amlodipine model. Dose is given under treatment only; lambda0
/// and lambda3 default to the fixed value 0 but may be searched as ranges.
struct PkpdConfig {
  double dose_mg = 10.0;
  Interval theta1{0.25, 0.40};
  Interval lambda0{0.0, 0.0};
  Interval lambda1{16.3, 36.3};
  Interval lambda2{0.1, 13.0};
  Interval lambda3{0.0, 0.0};
  double threshold = 140.0;

  /// Throws DomainError: theta1 outside [0,1], lambda2.lo < 0, negative dose,
  /// non-finite threshold.
  void validate() const;
  /// Box in search order theta1, lambda0, lambda1, lambda2, lambda3.
  std::vector<NamedInterval> box() const;
};

struct Lambda {
  double l0 = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

struct WeightedPoint {
  double b = 0.0;
  double weight = 1.0;
  bool operator==(const WeightedPoint&) const = default;
};

struct WeightedEmpiricalDist {
  std::vector<WeightedPoint> points;
  /// Set by truncate_renormalize.
  std::optional<double> truncated_at;
  double dropped_mass_fraction = 0.0;
  std::size_t dropped_points = 0;

  double total_weight() const noexcept;
  bool operator==(const WeightedEmpiricalDist&) const = default;
};

/// Throws DomainError on negative or non-finite weights, or a non-positive total.
void validate(const WeightedEmpiricalDist& dist);

/// Drops b < threshold and rescales the remaining weights to sum to 1.
/// Throws EmptyDataError when nothing survives.
WeightedEmpiricalDist truncate_renormalize(const WeightedEmpiricalDist& dist, double threshold);

double effective_concentration(double theta0, double theta1);

/// b - [l0 + a l1 m/(l2+m) + a l3]. Throws SingularityError when l2 + m == 0.
double sbp_at_24h(double b, Arm a, double m, const Lambda& lambda);

/// 1 when the 24h SBP is strictly below threshold.
int resolved_indicator(double b, Arm a, double m, const Lambda& lambda, double threshold = 140.0);

/// Weighted mean of the resolution indicator; the concentration is dose*theta1
/// under treatment and 0 under placebo. Requires a truncated, nonempty
/// distribution (DomainError otherwise). `negative_sbp`, when given, is
/// incremented once per point whose predicted SBP is negative.
double mu_bar_pkpd(const WeightedEmpiricalDist& dist, Arm a, double theta1, const Lambda& lambda,
                   double dose_mg = 10.0, double threshold = 140.0,
                   std::uint64_t* negative_sbp = nullptr);

/// Bounds on mu1 - mu0 over the config's box. Components carry mu1 and mu0
/// at both extremes, the negative-SBP count and the dropped mass.
BoundsResult case_bounds(const WeightedEmpiricalDist& dist, const PkpdConfig& cfg,
                         const SearchConfig& search);

}  // namespace causalbounds::pkpd
