#pragma once

// Central H-infinity filter: the Kalman-form estimator built on the
// stabilizing solution of an indefinite Riccati equation that weights the
// observations with +I and the estimated signal with -level^2 I.

#include <vector>

#include "regret/linalg.hpp"
#include "regret/state_space.hpp"

namespace regret {

/// Stabilizing solution for the stacked output map [H; L] with weight
/// diag(I_m, -level^2 I_p). Throws Infeasible unless the solution exists,
/// P >= 0, the innovation has inertia (m positive, p negative) and the
/// a-posteriori closed loop F - K H is stable.
RiccatiSolution hinf_riccati(const StateSpaceModel& model, double level);

/// Central filter of order n with ||T_K||^2 <= level^2.
LtiFilter hinf_filter(const StateSpaceModel& model, double level);

struct LevelProbe {
  double level = 0.0;
  bool feasible = false;
};

struct HinfResult {
  double level_star = 0.0;
  LtiFilter filter;
  std::vector<LevelProbe> record;
};

/// Smallest feasible level within relative `tol`, by bisection between the
/// noncausal estimator's peak (a lower bound for every causal filter) and
/// the Kalman filter's peak. Throws BracketFailure on a non-monotone record.
HinfResult hinf_optimal(const StateSpaceModel& model, double tol = 1e-6);

}  // namespace regret
