#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "causalbounds/probability.hpp"

namespace causalbounds {

/// Design for the outcome regression m(A, W; gamma).
///   main_effects: intercept, A, one indicator per non-reference W level.
///   saturated:    main effects plus A x W interactions (one parameter per cell).
enum class LogisticDesign { saturated, main_effects };

std::string to_string(LogisticDesign d);
LogisticDesign logistic_design_from_string(std::string_view s);

inline constexpr int kLogisticMaxIterations = 100;
inline constexpr double kLogisticGradientTolerance = 1e-8;
/// Any coefficient exceeding this magnitude is treated as (quasi-)separation.
inline constexpr double kSeparationMagnitude = 30.0;

struct LogisticModelFit {
  LogisticDesign design = LogisticDesign::saturated;
  /// W levels in order of first appearance; the first is the reference.
  std::vector<std::string> levels;
  std::vector<std::string> coefficient_names;
  std::vector<double> coefficients;
  bool converged = false;
  int iterations = 0;
  /// Total (not averaged) Bernoulli log-likelihood at the estimate.
  double log_likelihood = 0.0;
  /// Euclidean norm of the mean log-likelihood gradient at the estimate.
  double gradient_norm = 0.0;
  std::size_t n_observations = 0;

  /// m(a, w; gamma-hat). Throws DomainError for a level not seen during fitting.
  double predict(Arm a, std::string_view w) const;
};

/// Maximum likelihood by damped Newton (step halving) from all-zero coefficients.
/// Throws SeparationError, SingularDesignError, or ConvergenceError.
LogisticModelFit fit_logistic(std::span<const BinaryRecord> records, LogisticDesign design);

/// Parametric g-formula: mu_a = (1/n) sum_i m(a, W_i; gamma-hat), i.e. every
/// unit keeps its W and has A set to a.
BoundsResult gformula_parametric(std::span<const BinaryRecord> records, const LogisticModelFit& fit);

/// Overflow-safe logistic function.
double expit(double x) noexcept;

}  // namespace causalbounds
