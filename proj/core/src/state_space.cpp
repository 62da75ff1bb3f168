#include "regret/state_space.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "regret/error.hpp"

namespace regret {

namespace {

bool finite(const Matrix& M) { return M.allFinite(); }

}  // namespace

void StateSpaceModel::validate() const {
  const auto n = F.rows();
  if (n == 0 || F.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "model: F must be square and non-empty");
  }
  if (G.rows() != n || G.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "model: G must have n rows");
  }
  if (H.cols() != n || H.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "model: H must have n columns");
  }
  if (L.cols() != n || L.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "model: L must have n columns");
  }
  if (!finite(F) || !finite(G) || !finite(H) || !finite(L)) {
    throw Error(ErrorCode::InvalidArgument, "model: entries must be finite");
  }
}

void LtiFilter::validate() const {
  const auto d = A.rows();
  if (A.cols() != d || B.rows() != d || C.cols() != d || C.rows() != D.rows() ||
      B.cols() != D.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "filter: inconsistent realization");
  }
  if (!finite(A) || !finite(B) || !finite(C) || !finite(D)) {
    throw Error(ErrorCode::InvalidArgument, "filter: entries must be finite");
  }
}

bool LtiFilter::is_stable() const { return spectral_radius(A) < 1.0; }

LtiFilter LtiFilter::zero(Eigen::Index order, Eigen::Index inputs, Eigen::Index outputs) {
  return {Matrix::Zero(order, order), Matrix::Zero(order, inputs),
          Matrix::Zero(outputs, order), Matrix::Zero(outputs, inputs)};
}

LtiFilter LtiFilter::static_gain(const Matrix& D) {
  return {Matrix::Zero(0, 0), Matrix::Zero(0, D.cols()), Matrix::Zero(D.rows(), 0), D};
}

CMatrix resolvent_apply(const Matrix& A, const CMatrix& M, Complex z) {
  const auto n = A.rows();
  if (n == 0) return CMatrix::Zero(0, M.cols());
  CMatrix zI_A = -A.cast<Complex>();
  zI_A.diagonal().array() += z;
  const Eigen::PartialPivLU<CMatrix> lu(zI_A);
  // rcond ~ 1e-14 means e^{j omega} sits on an eigenvalue of A.
  if (lu.rcond() < 1e-14) {
    throw Error(ErrorCode::SingularResolvent, "resolvent is singular on the unit circle");
  }
  return lu.solve(M);
}

CMatrix eval_transfer(const LtiFilter& filt, Complex z) {
  CMatrix out = filt.D.cast<Complex>();
  if (filt.order() > 0) {
    out += filt.C.cast<Complex>() * resolvent_apply(filt.A, filt.B.cast<Complex>(), z);
  }
  return out;
}

CMatrix eval_adjoint(const LtiFilter& filt, Complex z) {
  // X~(z) = [X(1/conj(z))]^* = D' + B'(z^{-1} I - A')^{-1} C' for a real realization.
  const LtiFilter adj{filt.A.transpose(), filt.C.transpose(), filt.B.transpose(),
                      filt.D.transpose()};
  return eval_transfer(adj, 1.0 / z);
}

PlantChannels eval_plant_channels(const StateSpaceModel& model, Complex z) {
  const CMatrix R = resolvent_apply(model.F, model.G.cast<Complex>(), z);
  return {model.H.cast<Complex>() * R, model.L.cast<Complex>() * R};
}

std::vector<double> unit_circle_poles(const StateSpaceModel& model) {
  std::vector<double> out;
  const Eigen::EigenSolver<Matrix> es(model.F, false);
  for (const Complex& lambda : es.eigenvalues()) {
    if (std::abs(std::abs(lambda) - 1.0) <= 1e-9) {
      double angle = std::arg(lambda);
      if (angle < 0.0) angle += 2.0 * M_PI;
      out.push_back(angle);
    }
  }
  return out;
}

CMatrix error_operator_sample(const StateSpaceModel& model, const CMatrix& K, double omega) {
  const auto p = model.signals();
  const auto q = model.disturbances();
  const auto m = model.observations();
  if (K.rows() != p || K.cols() != m) {
    throw Error(ErrorCode::DimensionMismatch, "error_operator_sample: filter has wrong shape");
  }
  const PlantChannels ch = eval_plant_channels(model, omega);
  CMatrix T(p, q + m);
  T.leftCols(q) = ch.L - K * ch.H;
  T.rightCols(m) = -K;
  return T;
}

CMatrix error_operator_sample(const StateSpaceModel& model, const LtiFilter& filt,
                              double omega) {
  return error_operator_sample(model, eval_transfer(filt, omega), omega);
}

LtiFilter series(const LtiFilter& first, const LtiFilter& second) {
  if (second.inputs() != first.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "series: output/input mismatch");
  }
  const auto d1 = first.order();
  const auto d2 = second.order();
  LtiFilter out;
  out.A = Matrix::Zero(d1 + d2, d1 + d2);
  out.A.topLeftCorner(d1, d1) = first.A;
  out.A.bottomLeftCorner(d2, d1) = second.B * first.C;
  out.A.bottomRightCorner(d2, d2) = second.A;
  out.B.resize(d1 + d2, first.inputs());
  out.B.topRows(d1) = first.B;
  out.B.bottomRows(d2) = second.B * first.D;
  out.C.resize(second.outputs(), d1 + d2);
  out.C.leftCols(d1) = second.D * first.C;
  out.C.rightCols(d2) = second.C;
  out.D = second.D * first.D;
  return out;
}

LtiFilter parallel(const LtiFilter& a, const LtiFilter& b) {
  if (a.inputs() != b.inputs() || a.outputs() != b.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "parallel: shape mismatch");
  }
  const auto da = a.order();
  const auto db = b.order();
  LtiFilter out;
  out.A = Matrix::Zero(da + db, da + db);
  out.A.topLeftCorner(da, da) = a.A;
  out.A.bottomRightCorner(db, db) = b.A;
  out.B.resize(da + db, a.inputs());
  out.B.topRows(da) = a.B;
  out.B.bottomRows(db) = b.B;
  out.C.resize(a.outputs(), da + db);
  out.C.leftCols(da) = a.C;
  out.C.rightCols(db) = b.C;
  out.D = a.D + b.D;
  return out;
}

LtiFilter inverse(const LtiFilter& filt) {
  if (filt.inputs() != filt.outputs()) {
    throw Error(ErrorCode::DimensionMismatch, "inverse: system must be square");
  }
  const Eigen::FullPivLU<Matrix> lu(filt.D);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::InvalidArgument, "inverse: feedthrough is singular");
  }
  const Matrix Di = lu.inverse();
  return {filt.A - filt.B * Di * filt.C, filt.B * Di, -Di * filt.C, Di};
}

}  // namespace regret
