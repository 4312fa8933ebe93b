#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "causalbounds/error.hpp"

namespace causalbounds {

/// Tolerance used for every "probabilities sum to one" check.
inline constexpr double kNormalizationTolerance = 1e-12;

/// Binary treatment level.
enum class Arm : int { control = 0, treated = 1 };

inline constexpr Arm other(Arm a) noexcept {
  return a == Arm::treated ? Arm::control : Arm::treated;
}
inline constexpr int to_int(Arm a) noexcept { return static_cast<int>(a); }
/// Throws DomainError for anything other than 0 or 1.
Arm arm_from_int(int a);

/// Closed interval [lo, hi].
class Interval {
 public:
  Interval() = default;
  /// Throws DomainError when lo > hi or either end is NaN.
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  bool degenerate() const noexcept { return lo_ == hi_; }
  bool contains(double x, double tol = 0.0) const noexcept {
    return x >= lo_ - tol && x <= hi_ + tol;
  }
  bool contains(const Interval& other, double tol = 0.0) const noexcept {
    return other.lo_ >= lo_ - tol && other.hi_ <= hi_ + tol;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

struct NamedInterval {
  std::string name;
  Interval range;
  friend bool operator==(const NamedInterval&, const NamedInterval&) = default;
};

// ---- joint table over (A, Y) ----------------------------------------------

/// Raw entries Pr(Y=y, A=a), indexed p<y><a>.
struct JointEntries {
  double p11 = 0.0;  // Y=1, A=1
  double p01 = 0.0;  // Y=0, A=1
  double p10 = 0.0;  // Y=1, A=0
  double p00 = 0.0;  // Y=0, A=0
};

struct JointCounts {
  std::uint64_t n11 = 0, n01 = 0, n10 = 0, n00 = 0;
  std::uint64_t total() const noexcept { return n11 + n01 + n10 + n00; }
  friend bool operator==(const JointCounts&, const JointCounts&) = default;
};

/// Every violated invariant of the four entries; empty iff they form a valid table.
ValidationReport validate(const JointEntries& entries);

/// Observed-data law of (A, Y) in the target context. Immutable.
class BinaryJointTable {
 public:
  /// Rejects (ValidationError) tables that fail `validate`; no silent renormalization.
  explicit BinaryJointTable(JointEntries entries, std::string context_label = {});

  const JointEntries& entries() const noexcept { return entries_; }
  double p11() const noexcept { return entries_.p11; }
  double p01() const noexcept { return entries_.p01; }
  double p10() const noexcept { return entries_.p10; }
  double p00() const noexcept { return entries_.p00; }
  /// Pr(Y=y, A=a).
  double joint(int y, Arm a) const noexcept;

  const std::optional<JointCounts>& counts() const noexcept { return counts_; }
  const std::string& context_label() const noexcept { return label_; }

  friend BinaryJointTable table_from_counts(const JointCounts& counts, std::string context_label);

 private:
  JointEntries entries_;
  std::optional<JointCounts> counts_;
  std::string label_;
};

/// Normalizes counts; throws EmptyDataError when all are zero.
BinaryJointTable table_from_counts(const JointCounts& counts, std::string context_label = {});
inline BinaryJointTable table_from_counts(std::uint64_t n11, std::uint64_t n01, std::uint64_t n10,
                                          std::uint64_t n00) {
  return table_from_counts(JointCounts{n11, n01, n10, n00});
}

/// Pr(A=a).
double marginal_a(const BinaryJointTable& t, Arm a) noexcept;
/// Pr(Y=1 | A=a); throws PositivityError when Pr(A=a) = 0.
double conditional_y_given_a(const BinaryJointTable& t, Arm a);

// ---- stratified table over (A, Y, W) --------------------------------------

struct Stratum {
  std::string label;
  double mass = 0.0;                   // f_{W|S=1}(w)
  std::optional<double> p_y1_given_a1; // absent when the arm is empty
  std::optional<double> p_y1_given_a0;
  std::optional<std::uint64_t> n_a1;
  std::optional<std::uint64_t> n_a0;

  /// Both arms carry a conditional probability (and a positive count when counts exist).
  bool has_both_arms() const noexcept;
};

class StratifiedTable {
 public:
  /// Validates masses (sum to one within 1e-12), probabilities in [0,1], unique labels.
  explicit StratifiedTable(std::vector<Stratum> strata);

  const std::vector<Stratum>& strata() const noexcept { return strata_; }
  /// True when some stratum with positive mass lacks an arm.
  bool positivity_violated() const noexcept;

 private:
  std::vector<Stratum> strata_;
};

// ---- unit-level records ---------------------------------------------------

struct BinaryRecord {
  int y = 0;
  int a = 0;
  std::string stratum;  // empty when there is no W
  friend bool operator==(const BinaryRecord&, const BinaryRecord&) = default;
};

/// Aggregates records into counts and the corresponding joint table.
BinaryJointTable joint_from_records(std::span<const BinaryRecord> records);
/// Empirical stratified table: masses n_w/n, arm-specific outcome means, counts.
/// Strata appear in order of first occurrence.
StratifiedTable stratify_records(std::span<const BinaryRecord> records);

// ---- results --------------------------------------------------------------

enum class IdentificationKind { point, partial, vacuous_parameter_space };

std::string to_string(IdentificationKind kind);
IdentificationKind identification_kind_from_string(const std::string& s);

/// Ordered name/value assignment (declaration order is preserved).
using ParamPoint = std::vector<std::pair<std::string, double>>;

struct SearchDiagnostics {
  std::uint64_t evaluations = 0;
  std::string method;
  std::uint64_t constraint_violations = 0;
  std::vector<std::string> notes;
  friend bool operator==(const SearchDiagnostics&, const SearchDiagnostics&) = default;
};

struct BoundsResult {
  Interval interval;
  IdentificationKind kind = IdentificationKind::partial;
  std::optional<ParamPoint> argmin;
  std::optional<ParamPoint> argmax;
  SearchDiagnostics diagnostics;
  /// Named intermediate quantities (e.g. mu1, mu0) reported alongside the interval.
  ParamPoint components;
  friend bool operator==(const BoundsResult&, const BoundsResult&) = default;
};

BoundsResult point_result(double value, std::string method);

/// Deterministic pairwise summation over a fixed traversal order.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace causalbounds
