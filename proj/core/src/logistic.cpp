#include "causalbounds/logistic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <unordered_map>

namespace causalbounds {

namespace {

/// Fitted probability this close to 0 or 1 in a pure cell counts as separation.
constexpr double kBoundaryProbability = 1e-6;

// log(1 + exp(eta)) without overflow.
double log1pexp(double eta) noexcept {
  return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta));
}

struct Cell {
  int a = 0;
  std::size_t level = 0;
  double n = 0.0;
  double y1 = 0.0;
};

class Design {
 public:
  Design(LogisticDesign kind, std::vector<std::string> levels)
      : kind_(kind), levels_(std::move(levels)) {
    names_.push_back("(intercept)");
    names_.push_back("a");
    for (std::size_t l = 1; l < levels_.size(); ++l) names_.push_back("w=" + levels_[l]);
    if (kind_ == LogisticDesign::saturated) {
      for (std::size_t l = 1; l < levels_.size(); ++l) names_.push_back("a:w=" + levels_[l]);
    }
  }

  std::size_t columns() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

  Eigen::VectorXd row(int a, std::size_t level) const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(columns()));
    x(0) = 1.0;
    x(1) = a;
    const auto nw = static_cast<Eigen::Index>(levels_.size() - 1);
    if (level > 0) {
      x(1 + static_cast<Eigen::Index>(level)) = 1.0;
      if (kind_ == LogisticDesign::saturated) x(1 + nw + static_cast<Eigen::Index>(level)) = a;
    }
    return x;
  }

 private:
  LogisticDesign kind_;
  std::vector<std::string> levels_;
  std::vector<std::string> names_;
};

std::string format_trace(const std::vector<double>& trace) {
  std::ostringstream os;
  os.precision(3);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    os << (i ? ", " : "") << trace[i];
  }
  return os.str();
}

}  // namespace

double expit(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::string to_string(LogisticDesign d) {
  return d == LogisticDesign::saturated ? "saturated" : "main-effects";
}

LogisticDesign logistic_design_from_string(std::string_view s) {
  if (s == "saturated") return LogisticDesign::saturated;
  if (s == "main-effects") return LogisticDesign::main_effects;
  throw DomainError("unknown logistic design '" + std::string(s) +
                    "' (expected saturated or main-effects)");
}

double LogisticModelFit::predict(Arm a, std::string_view w) const {
  const auto it = std::find(levels.begin(), levels.end(), w);
  if (it == levels.end()) {
    throw DomainError("stratum '" + std::string(w) + "' was not present when the model was fit");
  }
  const auto level = static_cast<std::size_t>(it - levels.begin());
  Design d(design, levels);
  const Eigen::VectorXd x = d.row(to_int(a), level);
  const Eigen::Map<const Eigen::VectorXd> beta(coefficients.data(),
                                               static_cast<Eigen::Index>(coefficients.size()));
  return expit(x.dot(beta));
}

LogisticModelFit fit_logistic(std::span<const BinaryRecord> records, LogisticDesign design) {
  if (records.empty()) throw EmptyDataError("no records to fit");

  // The likelihood depends on the data only through the (a, w) cell counts.
  std::vector<std::string> levels;
  std::unordered_map<std::string, std::size_t> level_index;
  std::map<std::pair<int, std::size_t>, Cell> cells;
  double total_y = 0.0;
  for (const auto& r : records) {
    arm_from_int(r.a);
    if (r.y != 0 && r.y != 1) throw DomainError("outcome must be 0 or 1");
    auto [it, inserted] = level_index.try_emplace(r.stratum, levels.size());
    if (inserted) levels.push_back(r.stratum);
    Cell& c = cells[{r.a, it->second}];
    c.a = r.a;
    c.level = it->second;
    c.n += 1.0;
    c.y1 += r.y;
    total_y += r.y;
  }
  const double n = static_cast<double>(records.size());
  if (total_y == 0.0 || total_y == n) {
    throw SeparationError("outcome is constant (all y=" + std::to_string(total_y == n ? 1 : 0) +
                          "); the likelihood has no finite maximizer");
  }

  const Design d(design, levels);
  const auto p = static_cast<Eigen::Index>(d.columns());
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(cells.size());
  Eigen::VectorXd support = Eigen::VectorXd::Zero(p);
  for (const auto& [key, c] : cells) {
    rows.push_back(d.row(c.a, c.level));
    support += rows.back() * c.n;
  }
  for (Eigen::Index j = 1; j < p; ++j) {
    if (support(j) == 0.0) {
      throw SingularDesignError("design column '" + d.names()[static_cast<std::size_t>(j)] +
                                "' has no supporting observations");
    }
  }

  {
    // Collinear columns (e.g. every record treated) leave gamma unidentified
    // even when the gradient happens to vanish at the start.
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(p, p);
    std::size_t k = 0;
    for (const auto& [key, c] : cells) {
      gram.noalias() += (c.n / n) * rows[k] * rows[k].transpose();
      ++k;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(gram);
    qr.setThreshold(1e-12);
    if (qr.rank() < p) {
      throw SingularDesignError("design has rank " + std::to_string(qr.rank()) + " < " + std::to_string(p) +
                                " columns; the records do not identify every coefficient");
    }
  }

  auto mean_loglik = [&](const Eigen::VectorXd& beta) {
    double ll = 0.0;
    std::size_t k = 0;
    for (const auto& [key, c] : cells) {
      const double eta = rows[k++].dot(beta);
      ll += c.y1 * eta - c.n * log1pexp(eta);
    }
    return ll / n;
  };

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double ll = mean_loglik(beta);
  std::vector<double> trace;
  LogisticModelFit fit;
  fit.design = design;
  fit.levels = levels;
  fit.coefficient_names = d.names();
  fit.n_observations = records.size();

  for (int iter = 0; iter <= kLogisticMaxIterations; ++iter) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(p, p);
    std::size_t k = 0;
    for (const auto& [key, c] : cells) {
      const Eigen::VectorXd& x = rows[k++];
      const double mu = expit(x.dot(beta));
      grad += x * (c.y1 - c.n * mu);
      info.noalias() += (c.n * mu * (1.0 - mu)) * x * x.transpose();
    }
    grad /= n;
    info /= n;
    const double gnorm = grad.norm();
    trace.push_back(gnorm);

    if (gnorm < kLogisticGradientTolerance) {
      // A pure cell fitted against the boundary means the maximizer sits at
      // infinity; the gradient merely flattened out before |coef| hit 30.
      std::size_t j = 0;
      for (const auto& [key, c] : cells) {
        const double mu = expit(rows[j++].dot(beta));
        const bool pure = c.y1 == 0.0 || c.y1 == c.n;
        if (pure && std::min(mu, 1.0 - mu) < kBoundaryProbability) {
          throw SeparationError("cell (a=" + std::to_string(c.a) + ", w='" + levels[c.level] +
                                "') has all y=" + std::to_string(c.y1 == 0.0 ? 0 : 1) +
                                " and its fitted probability reached the boundary; the data are "
                                "(quasi-)separated");
        }
      }
      fit.converged = true;
      fit.iterations = iter;
      fit.gradient_norm = gnorm;
      fit.log_likelihood = ll * n;
      fit.coefficients.assign(beta.data(), beta.data() + p);
      return fit;
    }
    if (iter == kLogisticMaxIterations) break;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.rcond() < 1e-14) {
      throw SingularDesignError("information matrix is singular; the design is not identified "
                                "by these records");
    }
    const Eigen::VectorXd step = ldlt.solve(grad);

    double scale = 1.0;
    Eigen::VectorXd candidate = beta + step;
    double cand_ll = mean_loglik(candidate);
    for (int halving = 0; halving < 30 && !(cand_ll >= ll); ++halving) {
      scale *= 0.5;
      candidate = beta + scale * step;
      cand_ll = mean_loglik(candidate);
    }
    beta = candidate;
    ll = cand_ll;

    if (beta.cwiseAbs().maxCoeff() > kSeparationMagnitude) {
      Eigen::Index j = 0;
      beta.cwiseAbs().maxCoeff(&j);
      throw SeparationError("coefficient '" + d.names()[static_cast<std::size_t>(j)] +
                            "' diverged past magnitude 30; the data are (quasi-)separated");
    }
  }
  throw ConvergenceError("logistic fit did not converge within 100 iterations; gradient trace: " +
                             format_trace(trace),
                         trace);
}

BoundsResult gformula_parametric(std::span<const BinaryRecord> records, const LogisticModelFit& fit) {
  if (!fit.converged) throw ComputationError("parametric g-formula requires a converged fit");
  if (records.empty()) throw EmptyDataError("no records for the parametric g-formula");
  std::vector<double> pred1;
  std::vector<double> pred0;
  pred1.reserve(records.size());
  pred0.reserve(records.size());
  std::unordered_map<std::string, std::pair<double, double>> by_level;
  for (const auto& r : records) {
    auto it = by_level.find(r.stratum);
    if (it == by_level.end()) {
      it = by_level
               .emplace(r.stratum, std::pair{fit.predict(Arm::treated, r.stratum),
                                             fit.predict(Arm::control, r.stratum)})
               .first;
    }
    pred1.push_back(it->second.first);
    pred0.push_back(it->second.second);
  }
  const double n = static_cast<double>(records.size());
  const double mu1 = pairwise_sum(pred1) / n;
  const double mu0 = pairwise_sum(pred0) / n;
  BoundsResult r = point_result(mu1 - mu0, "g-formula-parametric/" + to_string(fit.design));
  r.diagnostics.evaluations = 2 * records.size();
  r.diagnostics.notes.push_back("logistic fit converged in " + std::to_string(fit.iterations) +
                                " Newton iterations");
  r.components = {{"mu1", mu1}, {"mu0", mu0}, {"log_likelihood", fit.log_likelihood}};
  return r;
}

}  // namespace causalbounds
