#pragma once

#include <string>
#include <vector>

#include "regret/linalg.hpp"

namespace regret {

/// Plant  x_{i+1} = F x_i + G w_i,  y_i = H x_i + v_i,  s_i = L x_i.
struct StateSpaceModel {
  Matrix F;  // n x n
  Matrix G;  // n x q
  Matrix H;  // m x n
  Matrix L;  // p x n
  std::string name;

  Eigen::Index states() const { return F.rows(); }
  Eigen::Index disturbances() const { return G.cols(); }
  Eigen::Index observations() const { return H.rows(); }
  Eigen::Index signals() const { return L.rows(); }

  /// Throws DimensionMismatch / InvalidArgument on malformed input.
  void validate() const;
};

/// Causal filter  xi_{i+1} = A xi_i + B y_i,  s^_i = C xi_i + D y_i.
struct LtiFilter {
  Matrix A;  // d x d
  Matrix B;  // d x m
  Matrix C;  // p x d
  Matrix D;  // p x m

  Eigen::Index order() const { return A.rows(); }
  Eigen::Index inputs() const { return D.cols(); }
  Eigen::Index outputs() const { return D.rows(); }

  void validate() const;
  bool is_stable() const;

  static LtiFilter zero(Eigen::Index order, Eigen::Index inputs, Eigen::Index outputs);
  static LtiFilter static_gain(const Matrix& D);
};

inline Complex unit_point(double omega) { return std::polar(1.0, omega); }

/// (z I - A)^{-1} M via an LU-factored resolvent. Throws SingularResolvent
/// when z is (numerically) an eigenvalue of A.
CMatrix resolvent_apply(const Matrix& A, const CMatrix& M, Complex z);
inline CMatrix resolvent_apply(const Matrix& A, const CMatrix& M, double omega) {
  return resolvent_apply(A, M, unit_point(omega));
}

/// D + C (z I - A)^{-1} B.
CMatrix eval_transfer(const LtiFilter& filt, Complex z);
inline CMatrix eval_transfer(const LtiFilter& filt, double omega) {
  return eval_transfer(filt, unit_point(omega));
}

/// Para-hermitian adjoint X~(z) = X*(z^{-*}), from the transposed realization
/// evaluated at 1/z. On the unit circle this is the conjugate transpose of
/// eval_transfer.
CMatrix eval_adjoint(const LtiFilter& filt, Complex z);
inline CMatrix eval_adjoint(const LtiFilter& filt, double omega) {
  return eval_adjoint(filt, unit_point(omega));
}

struct PlantChannels {
  CMatrix H;  // m x q :  H (zI - F)^{-1} G
  CMatrix L;  // p x q :  L (zI - F)^{-1} G
};

PlantChannels eval_plant_channels(const StateSpaceModel& model, Complex z);
inline PlantChannels eval_plant_channels(const StateSpaceModel& model, double omega) {
  return eval_plant_channels(model, unit_point(omega));
}

/// Angles in [0, 2pi) of eigenvalues of F on the unit circle (within 1e-9).
/// Plant channels do not exist there.
std::vector<double> unit_circle_poles(const StateSpaceModel& model);

/// [L(z) - K(z) H(z),  -K(z)] for a filter response K(z) at z = e^{j omega}.
CMatrix error_operator_sample(const StateSpaceModel& model, const CMatrix& K, double omega);
CMatrix error_operator_sample(const StateSpaceModel& model, const LtiFilter& filt, double omega);

// Realization algebra. Used for analysis-side cross-checks; the synthesized
// filter itself is assembled directly from its block formulas.

/// y = second(first(u)).
LtiFilter series(const LtiFilter& first, const LtiFilter& second);
/// y = a(u) + b(u).
LtiFilter parallel(const LtiFilter& a, const LtiFilter& b);
/// Inverse system of a square realization with invertible D.
LtiFilter inverse(const LtiFilter& filt);

}  // namespace regret
