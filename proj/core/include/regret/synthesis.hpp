#pragma once

// Regret-optimal causal estimation for a state-space plant.
//
// The pipeline: a Kalman Riccati equation P, two gamma-dependent Riccati
// equations W and Q, a two-sided Stein equation U and two Gramians Pi, Z.
// The threshold gamma is feasible iff the Hankel norm of the strictly
// anticausal part T(z) is at most one, i.e. lambda_max(Z Pi) <= 1. At the
// optimal gamma the Nehari approximant of T yields a filter of order 3n.

#include <optional>
#include <string>
#include <vector>

#include "regret/linalg.hpp"
#include "regret/state_space.hpp"

namespace regret {

/// Everything that depends on gamma.
struct GammaWorkspace {
  double gamma = 0.0;

  RiccatiSolution p;  // P, K_P, I + HPH', F_P
  RiccatiSolution w;  // W, K_W, R_W, F_W
  RiccatiSolution q;  // Q, K_Q, R_Q, F_Q

  Matrix U;
  Matrix Pi;
  Matrix Z;

  /// lambda_max(Z Pi) = sigma_max(Pi^{1/2} Z Pi^{1/2}) = squared Hankel norm of T.
  double sigma = 0.0;
};

struct NehariConstants {
  Matrix G_N;       // n x m
  Matrix F_N;       // n x n
  Matrix Pi_tilde;  // p x n
};

struct GammaProbe {
  double gamma = 0.0;
  double sigma = 0.0;
  bool solved = false;  // false: some gamma-dependent equation had no valid solution
  bool pass = false;
};

struct SynthesisOptions {
  double tol = 1e-6;          // existence functional lands in [1 - tol, 1]
  int max_iterations = 60;    // bisection steps after the coarse scan
  int scan_points = 8;        // coarse log-spaced bracket scan
  double floor_ratio = 1e-6;  // lower bracket = floor_ratio * upper
};

struct SynthesisResult {
  /// Optimal threshold; the optimal regret is gamma_star^2.
  double gamma_star = 0.0;
  /// True for L = 0 or G = 0: nothing to estimate, zero filter, zero regret.
  bool degenerate = false;

  RiccatiSolution p;
  std::optional<GammaWorkspace> workspace;
  std::optional<NehariConstants> nehari;

  LtiFilter filter;  // order 3n
  LtiFilter kalman;  // order n
  std::vector<GammaProbe> record;
};

/// Kalman Riccati equation P = GG' + FPF' - FPH'(I+HPH')^{-1}HPF' with
/// K_P = FPH'(I+HPH')^{-1} and closed loop F_P = F - K_P H.
RiccatiSolution riccati_p(const StateSpaceModel& model);

/// W = H'H + gamma^{-2} L'L + F'WF - K_W' R_W K_W, K_W = R_W^{-1} G'WF,
/// R_W = I + G'WG, F_W = F - G K_W.
RiccatiSolution riccati_w(const StateSpaceModel& model, double gamma);

/// Q = -G R_W^{-1} G' + F_W Q F_W' - K_Q R_Q K_Q', K_Q = F_W Q L' R_Q^{-1},
/// R_Q = gamma^2 I + LQL', F_Q = F_W - K_Q L. Throws IndefiniteRQ when R_Q is
/// not positive definite.
RiccatiSolution riccati_q(const StateSpaceModel& model, double gamma,
                          const RiccatiSolution& w);

/// U = K_Q L P F_P' + F_Q U F_P'.
Matrix lyapunov_u(const StateSpaceModel& model, const RiccatiSolution& p,
                  const RiccatiSolution& q);

/// Pi = F_P' Pi F_P + H'(I+HPH')^{-1}H.
Matrix gramian_pi(const StateSpaceModel& model, const RiccatiSolution& p);

/// Z = F_P Z F_P' + F_P (P-U)' L' R_Q^{-1} L (P-U) F_P'.
Matrix gramian_z(const StateSpaceModel& model, const RiccatiSolution& p,
                 const RiccatiSolution& q, const Matrix& U);

/// All gamma-dependent quantities. Throws on any solver failure.
GammaWorkspace make_workspace(const StateSpaceModel& model, const RiccatiSolution& p,
                              double gamma);

struct ExistenceCheck {
  double sigma = 0.0;
  bool pass = false;
  bool solved = false;
  std::string failure;  // solver message when !solved
};

/// Existence condition for a gamma-optimal estimator. Solver failures are
/// reported with solved = false (infeasible, distinct from sigma > 1).
ExistenceCheck existence_check(const StateSpaceModel& model, double gamma);
ExistenceCheck existence_check(const StateSpaceModel& model, const RiccatiSolution& p,
                               double gamma);

struct GammaSearch {
  double gamma_star = 0.0;
  GammaWorkspace workspace;
  std::vector<GammaProbe> record;
};

/// Bisection on the existence condition. Upper bracket from the Kalman
/// filter's regret (always achievable), lower bracket floor_ratio below it.
/// Throws BracketFailure if the probe record is not monotone.
GammaSearch find_gamma_star(const StateSpaceModel& model, const SynthesisOptions& options = {});

/// Nehari approximant constants for T(z). Throws SingularPencil when
/// I - F_P Z F_P' Pi is singular.
NehariConstants nehari_constants(const StateSpaceModel& model, const GammaWorkspace& ws);

/// State-space realization of order 3n:
///   A = [F_P 0 0; F21 F_N 0; F31 F32 F_W],  B = [K_P; G_N Re^{-1/2}; G3],
///   C = [H1, R_Q^{1/2} Pi~ F_N, L],         D = L(P-U)H'Re^{-1} + R_Q^{1/2} Pi~ G_N Re^{-1/2},
/// with Re = I + HPH'.
LtiFilter assemble_regret_filter(const StateSpaceModel& model, const GammaWorkspace& ws,
                                 const NehariConstants& nehari);

/// Full pipeline: gamma search, Nehari constants, 3n filter.
SynthesisResult synthesize(const StateSpaceModel& model, const SynthesisOptions& options = {});

/// The causal H2 (Kalman) filter
///   (F_P, K_P, L(I - PH'Re^{-1}H), LPH'Re^{-1}).
LtiFilter kalman_filter(const StateSpaceModel& model);
LtiFilter kalman_filter(const StateSpaceModel& model, const RiccatiSolution& p);

/// Noncausal (smoothing) estimator K0 = L H~ (I + H H~)^{-1} at z.
CMatrix noncausal_response(const StateSpaceModel& model, Complex z);
inline CMatrix noncausal_response(const StateSpaceModel& model, double omega) {
  return noncausal_response(model, unit_point(omega));
}

// Frequency-domain factors. Each takes a point z in the complex plane; the
// unit-circle values are the ones used by the filter, off-circle values are
// used for causality checks.

struct FactorPair {
  CMatrix value;
  CMatrix inverse;
};

/// Delta(z) = (I + H(zI-F)^{-1}K_P) Re^{1/2}; the inverse is realized through
/// F_P: Re^{-1/2} (I - H(zI-F_P)^{-1} K_P).
FactorPair delta_factor(const StateSpaceModel& model, const RiccatiSolution& p, Complex z);

/// Nabla(z) = R_Q^{-1/2}(I - L(zI-F_Q)^{-1}K_Q); inverse (I + L(zI-F_W)^{-1}K_Q) R_Q^{1/2}.
FactorPair nabla_factor(const StateSpaceModel& model, const GammaWorkspace& ws, Complex z);

struct CausalSplit {
  CMatrix T;       // strictly anticausal part
  CMatrix S;       // causal part (both terms)
  CMatrix S_tail;  // -R_Q^{-1/2} L [(zI-F_Q)^{-1}F_Q + I] U H' Re^{-*/2}
};

/// Nabla(z) L(z) H~(z) Delta~^{-1}(z) = T(z) + S(z).
CausalSplit causal_anticausal_split(const StateSpaceModel& model, const GammaWorkspace& ws,
                                    Complex z);

/// Right-hand side of the split: Nabla L H~ Delta^{-~} evaluated directly.
CMatrix split_target(const StateSpaceModel& model, const GammaWorkspace& ws, Complex z);

/// K_N(z) = Pi~ (I + F_N (zI - F_N)^{-1}) G_N.
CMatrix nehari_response(const NehariConstants& nehari, Complex z);

/// Nabla^{-1}(K_N + S_tail) Delta^{-1} + K_H2, evaluated factor by factor.
CMatrix regret_filter_factored(const StateSpaceModel& model, const GammaWorkspace& ws,
                               const NehariConstants& nehari, double omega);

}  // namespace regret
