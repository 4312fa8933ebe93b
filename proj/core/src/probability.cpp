#include "causalbounds/probability.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace causalbounds {

namespace {

std::string join_report(const ValidationReport& report) {
  std::string out = "validation failed:";
  for (const auto& v : report) {
    out += " [" + v.code + "] " + v.message + ";";
  }
  return out;
}

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void check_probability(ValidationReport& report, const std::string& name, double p) {
  if (!std::isfinite(p)) {
    report.push_back({"non_finite", name + " is not a finite number"});
  } else if (p < 0.0) {
    report.push_back({"negative_entry", name + " = " + fmt_double(p) + " is negative"});
  } else if (p > 1.0) {
    report.push_back({"entry_above_one", name + " = " + fmt_double(p) + " exceeds 1"});
  }
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : InputError(join_report(report)), report_(std::move(report)) {}

Arm arm_from_int(int a) {
  if (a == 0) return Arm::control;
  if (a == 1) return Arm::treated;
  throw DomainError("treatment level must be 0 or 1, got " + std::to_string(a));
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
  if (lo > hi) {
    throw DomainError("interval lower end " + fmt_double(lo) + " exceeds upper end " +
                      fmt_double(hi));
  }
}

ValidationReport validate(const JointEntries& e) {
  ValidationReport report;
  check_probability(report, "Pr(Y=1,A=1)", e.p11);
  check_probability(report, "Pr(Y=0,A=1)", e.p01);
  check_probability(report, "Pr(Y=1,A=0)", e.p10);
  check_probability(report, "Pr(Y=0,A=0)", e.p00);
  const double sum = e.p11 + e.p01 + e.p10 + e.p00;
  if (std::isfinite(sum) && std::abs(sum - 1.0) > kNormalizationTolerance) {
    report.push_back({"sum_not_one", "entries sum to " + fmt_double(sum) + " (sum != 1)"});
  }
  return report;
}

BinaryJointTable::BinaryJointTable(JointEntries entries, std::string context_label)
    : entries_(entries), label_(std::move(context_label)) {
  auto report = validate(entries_);
  if (!report.empty()) throw ValidationError(std::move(report));
}

double BinaryJointTable::joint(int y, Arm a) const noexcept {
  if (a == Arm::treated) return y == 1 ? entries_.p11 : entries_.p01;
  return y == 1 ? entries_.p10 : entries_.p00;
}

BinaryJointTable table_from_counts(const JointCounts& counts, std::string context_label) {
  const auto total = counts.total();
  if (total == 0) throw EmptyDataError("all counts are zero; cannot form a probability table");
  const double n = static_cast<double>(total);
  JointEntries e{static_cast<double>(counts.n11) / n, static_cast<double>(counts.n01) / n,
                 static_cast<double>(counts.n10) / n, static_cast<double>(counts.n00) / n};
  BinaryJointTable t(e, std::move(context_label));
  t.counts_ = counts;
  return t;
}

double marginal_a(const BinaryJointTable& t, Arm a) noexcept {
  return a == Arm::treated ? t.p11() + t.p01() : t.p10() + t.p00();
}

double conditional_y_given_a(const BinaryJointTable& t, Arm a) {
  const double pa = marginal_a(t, a);
  if (!(pa > 0.0)) {
    throw PositivityError("Pr(A=" + std::to_string(to_int(a)) +
                          ") = 0; Pr(Y=1 | A=a) is undefined");
  }
  return t.joint(1, a) / pa;
}

bool Stratum::has_both_arms() const noexcept {
  if (!p_y1_given_a1 || !p_y1_given_a0) return false;
  if (n_a1 && *n_a1 == 0) return false;
  if (n_a0 && *n_a0 == 0) return false;
  return true;
}

StratifiedTable::StratifiedTable(std::vector<Stratum> strata) : strata_(std::move(strata)) {
  ValidationReport report;
  if (strata_.empty()) throw EmptyDataError("stratified table has no strata");
  std::map<std::string, int> seen;
  double total = 0.0;
  for (const auto& s : strata_) {
    if (++seen[s.label] == 2) {
      report.push_back({"duplicate_stratum", "stratum '" + s.label + "' appears more than once"});
    }
    check_probability(report, "mass of stratum '" + s.label + "'", s.mass);
    if (s.p_y1_given_a1) {
      check_probability(report, "Pr(Y=1|A=1,W=" + s.label + ")", *s.p_y1_given_a1);
    }
    if (s.p_y1_given_a0) {
      check_probability(report, "Pr(Y=1|A=0,W=" + s.label + ")", *s.p_y1_given_a0);
    }
    total += s.mass;
  }
  if (std::isfinite(total) && std::abs(total - 1.0) > kNormalizationTolerance) {
    report.push_back({"sum_not_one", "stratum masses sum to " + fmt_double(total) + " (sum != 1)"});
  }
  if (!report.empty()) throw ValidationError(std::move(report));
}

bool StratifiedTable::positivity_violated() const noexcept {
  for (const auto& s : strata_) {
    if (s.mass > 0.0 && !s.has_both_arms()) return true;
  }
  return false;
}

BinaryJointTable joint_from_records(std::span<const BinaryRecord> records) {
  JointCounts c;
  for (const auto& r : records) {
    arm_from_int(r.a);
    if (r.y != 0 && r.y != 1) throw DomainError("outcome must be 0 or 1");
    if (r.a == 1) (r.y == 1 ? c.n11 : c.n01)++;
    else (r.y == 1 ? c.n10 : c.n00)++;
  }
  return table_from_counts(c);
}

StratifiedTable stratify_records(std::span<const BinaryRecord> records) {
  if (records.empty()) throw EmptyDataError("no records to stratify");
  struct Cell {
    std::uint64_t n1 = 0, y1 = 0, n0 = 0, y0 = 0;
  };
  std::vector<std::string> order;
  std::unordered_map<std::string, Cell> cells;
  for (const auto& r : records) {
    arm_from_int(r.a);
    if (r.y != 0 && r.y != 1) throw DomainError("outcome must be 0 or 1");
    auto [it, inserted] = cells.try_emplace(r.stratum);
    if (inserted) order.push_back(r.stratum);
    if (r.a == 1) {
      ++it->second.n1;
      it->second.y1 += static_cast<std::uint64_t>(r.y);
    } else {
      ++it->second.n0;
      it->second.y0 += static_cast<std::uint64_t>(r.y);
    }
  }
  const double n = static_cast<double>(records.size());
  std::vector<Stratum> strata;
  strata.reserve(order.size());
  for (const auto& label : order) {
    const Cell& c = cells.at(label);
    Stratum s;
    s.label = label;
    s.mass = static_cast<double>(c.n1 + c.n0) / n;
    s.n_a1 = c.n1;
    s.n_a0 = c.n0;
    if (c.n1 > 0) s.p_y1_given_a1 = static_cast<double>(c.y1) / static_cast<double>(c.n1);
    if (c.n0 > 0) s.p_y1_given_a0 = static_cast<double>(c.y0) / static_cast<double>(c.n0);
    strata.push_back(std::move(s));
  }
  return StratifiedTable(std::move(strata));
}

std::string to_string(IdentificationKind kind) {
  switch (kind) {
    case IdentificationKind::point: return "point";
    case IdentificationKind::partial: return "partial";
    case IdentificationKind::vacuous_parameter_space: return "vacuous-parameter-space";
  }
  return "partial";
}

IdentificationKind identification_kind_from_string(const std::string& s) {
  if (s == "point") return IdentificationKind::point;
  if (s == "partial") return IdentificationKind::partial;
  if (s == "vacuous-parameter-space") return IdentificationKind::vacuous_parameter_space;
  throw DomainError("unknown identification kind '" + s + "'");
}

BoundsResult point_result(double value, std::string method) {
  BoundsResult r;
  r.interval = Interval(value, value);
  r.kind = IdentificationKind::point;
  r.diagnostics.evaluations = 1;
  r.diagnostics.method = std::move(method);
  return r;
}

double pairwise_sum(std::span<const double> values) noexcept {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace causalbounds
