#pragma once

#include "causalbounds/probability.hpp"

namespace causalbounds {

/// Nonparametric bounds on mu_a = Pr(Y^a = 1):
/// [Pr(Y=1,A=a), Pr(Y=1,A=a) + Pr(A != a)].
Interval manski_mu_bounds(const BinaryJointTable& t, Arm a);

/// Nonparametric ACE bounds
///   [-Pr(Y=0,A=1) - Pr(Y=1,A=0),  Pr(Y=1,A=1) + Pr(Y=0,A=0)].
/// Always width one and always containing zero. argmin/argmax carry the
/// extreme counterfactual assignments.
BoundsResult manski_ace_bounds(const BinaryJointTable& t);

/// Brute-force version of the same argument: sweeps the unidentified
/// Pr(Y^1=1 | A=0) and Pr(Y^0=1 | A=1) over a grid on [0,1]^2 (endpoints
/// included) and returns the range of the resulting ACE values.
/// Requires 0 < grid_step <= 0.1.
Interval manski_oracle(const BinaryJointTable& t, double grid_step);

/// Point identification under marginal exchangeability with positivity:
/// Pr(Y=1|A=1) - Pr(Y=1|A=0). Throws PositivityError if an arm is empty.
BoundsResult randomized_point_estimate(const BinaryJointTable& t);

/// Nonparametric g-formula: mu_a = sum_w Pr(Y=1|A=a,W=w) f(w).
/// Zero-mass strata are dropped (noted in diagnostics); any remaining stratum
/// missing an arm raises a PositivityError naming it.
BoundsResult gformula_nonparametric(const StratifiedTable& s);

}  // namespace causalbounds
