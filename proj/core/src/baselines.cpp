#include "regret/baselines.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "regret/analysis.hpp"
#include "regret/error.hpp"
#include "regret/synthesis.hpp"

namespace regret {

namespace {

[[noreturn]] void infeasible(double level, const std::string& why) {
  std::ostringstream msg;
  msg << "hinf_filter: level " << level << " infeasible (" << why << ")";
  throw Error(ErrorCode::Infeasible, msg.str());
}

Matrix observer_gain_x(const StateSpaceModel& model, const Matrix& P) {
  const auto m = model.observations();
  const Matrix Re = Matrix::Identity(m, m) + model.H * P * model.H.transpose();
  return P * model.H.transpose() * Re.llt().solve(Matrix::Identity(m, m));  // P H' Re^{-1}
}

}  // namespace

RiccatiSolution hinf_riccati(const StateSpaceModel& model, double level) {
  model.validate();
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw Error(ErrorCode::InvalidArgument, "hinf_filter: level must be positive and finite");
  }
  const auto n = model.states();
  const auto m = model.observations();
  const auto p = model.signals();
  Matrix Cbar(m + p, n);
  Cbar << model.H, model.L;
  Matrix R0 = Matrix::Zero(m + p, m + p);
  R0.topLeftCorner(m, m).setIdentity();
  R0.bottomRightCorner(p, p) = -level * level * Matrix::Identity(p, p);

  RiccatiSolution sol;
  try {
    sol = solve_dare({model.F, Cbar.transpose(), model.G * model.G.transpose(), R0,
                      DareForm::Estimation});
  } catch (const Error& e) {
    infeasible(level, e.what());
  }

  const Eigen::SelfAdjointEigenSolver<Matrix> inertia(symmetrize(sol.innovation));
  const auto& ev = inertia.eigenvalues();
  const auto positive = (ev.array() > 0.0).count();
  const auto negative = (ev.array() < 0.0).count();
  if (positive != m || negative != p) infeasible(level, "innovation inertia");

  const Eigen::SelfAdjointEigenSolver<Matrix> psd(symmetrize(sol.X));
  const double scale = std::max(1.0, sol.X.norm());
  if (psd.eigenvalues().minCoeff() < -1e-9 * scale) infeasible(level, "P not positive semidefinite");

  const Matrix K = model.F * observer_gain_x(model, sol.X);
  if (spectral_radius(model.F - K * model.H) >= 1.0 - 1e-9) {
    infeasible(level, "observer closed loop unstable");
  }
  return sol;
}

LtiFilter hinf_filter(const StateSpaceModel& model, double level) {
  const RiccatiSolution sol = hinf_riccati(model, level);
  const auto n = model.states();
  const Matrix PHR = observer_gain_x(model, sol.X);
  const Matrix K = model.F * PHR;
  return {model.F - K * model.H, K, model.L * (Matrix::Identity(n, n) - PHR * model.H),
          model.L * PHR};
}

HinfResult hinf_optimal(const StateSpaceModel& model, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "hinf_optimal: tol must be positive");
  model.validate();
  HinfResult out;
  if (model.L.isZero(0.0)) {
    out.filter = kalman_filter(model);
    return out;
  }

  auto feasible = [&](double level) {
    bool ok = true;
    try {
      hinf_riccati(model, level);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      ok = false;
    }
    out.record.push_back({level, ok});
    return ok;
  };

  const double floor_peak = operator_norm_sq(model, noncausal_estimator(model)).value;
  const double kalman_peak = operator_norm_sq(model, response_of(kalman_filter(model))).value;
  double lo = 0.999 * std::sqrt(floor_peak);
  double hi = 1.01 * std::sqrt(kalman_peak);
  for (int k = 0; k < 40 && !feasible(hi); ++k) hi *= 1.5;
  if (!out.record.back().feasible) {
    throw Error(ErrorCode::BracketFailure, "hinf_optimal: no feasible upper level");
  }
  for (int k = 0; k < 60 && lo > 0.0 && feasible(lo); ++k) {
    hi = lo;
    lo *= 0.5;
  }

  while (hi / lo - 1.0 > tol) {
    const double mid = std::sqrt(lo * hi);
    if (feasible(mid)) hi = mid;
    else lo = mid;
  }

  double lowest_ok = std::numeric_limits<double>::infinity();
  double highest_bad = 0.0;
  for (const auto& r : out.record) {
    if (r.feasible) lowest_ok = std::min(lowest_ok, r.level);
    else highest_bad = std::max(highest_bad, r.level);
  }
  if (highest_bad > lowest_ok) {
    throw Error(ErrorCode::BracketFailure, "hinf_optimal: feasibility not monotone in level");
  }
  out.level_star = hi;
  out.filter = hinf_filter(model, hi);
  return out;
}

}  // namespace regret
