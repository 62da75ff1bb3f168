#include <complex>

#include "regret/synthesis.hpp"

namespace regret {

namespace {

Matrix lower_inverse(const Matrix& S) {
  return S.triangularView<Eigen::Lower>().solve(Matrix::Identity(S.rows(), S.rows()));
}

}  // namespace

FactorPair delta_factor(const StateSpaceModel& model, const RiccatiSolution& p, Complex z) {
  const auto m = model.observations();
  const CMatrix I = CMatrix::Identity(m, m);
  const CMatrix Hc = model.H.cast<Complex>();
  const CMatrix KPc = p.gain.cast<Complex>();
  const CMatrix Rh = p.innovation_sqrt.cast<Complex>();
  const CMatrix Rhi = lower_inverse(p.innovation_sqrt).cast<Complex>();
  FactorPair out;
  out.value = (I + Hc * resolvent_apply(model.F, KPc, z)) * Rh;
  out.inverse = Rhi * (I - Hc * resolvent_apply(p.closed_loop, KPc, z));
  return out;
}

FactorPair nabla_factor(const StateSpaceModel& model, const GammaWorkspace& ws, Complex z) {
  const auto p = model.signals();
  const CMatrix I = CMatrix::Identity(p, p);
  const CMatrix Lc = model.L.cast<Complex>();
  const CMatrix KQc = ws.q.gain.cast<Complex>();
  const CMatrix RQh = ws.q.innovation_sqrt.cast<Complex>();
  const CMatrix RQhi = lower_inverse(ws.q.innovation_sqrt).cast<Complex>();
  FactorPair out;
  out.value = RQhi * (I - Lc * resolvent_apply(ws.q.closed_loop, KQc, z));
  out.inverse = (I + Lc * resolvent_apply(ws.w.closed_loop, KQc, z)) * RQh;
  return out;
}

CausalSplit causal_anticausal_split(const StateSpaceModel& model, const GammaWorkspace& ws,
                                    Complex z) {
  const auto n = model.states();
  const CMatrix In = CMatrix::Identity(n, n);
  const Matrix& FP = ws.p.closed_loop;
  const Matrix& FQ = ws.q.closed_loop;
  const Matrix RQhi = lower_inverse(ws.q.innovation_sqrt);
  const Matrix Rhit = lower_inverse(ws.p.innovation_sqrt).transpose();  // Re^{-*/2}
  const CMatrix Lc = model.L.cast<Complex>();
  const CMatrix tail_in = (model.H.transpose() * Rhit).cast<Complex>();  // n x m

  CausalSplit out;
  // (z^{-1} I - F_P')^{-1} = z (I - z F_P')^{-1}
  const Matrix left = RQhi * model.L * (ws.p.X - ws.U) * FP.transpose();
  CMatrix pencil = In - z * FP.transpose().cast<Complex>();
  out.T = left.cast<Complex>() * (z * pencil.partialPivLu().solve(tail_in));

  const CMatrix PH = (ws.p.X).cast<Complex>() * tail_in;
  const CMatrix UH = ws.U.cast<Complex>() * tail_in;
  const CMatrix head = nabla_factor(model, ws, z).value * Lc *
                       (resolvent_apply(model.F, model.F.cast<Complex>() * PH, z) + PH);
  out.S_tail = -RQhi.cast<Complex>() * Lc *
               (resolvent_apply(FQ, FQ.cast<Complex>() * UH, z) + UH);
  out.S = head + out.S_tail;
  return out;
}

CMatrix split_target(const StateSpaceModel& model, const GammaWorkspace& ws, Complex z) {
  const Complex zr = 1.0 / std::conj(z);
  const PlantChannels ch = eval_plant_channels(model, z);
  const CMatrix Ht = eval_plant_channels(model, zr).H.adjoint();             // H~(z)
  const CMatrix Dit = delta_factor(model, ws.p, zr).inverse.adjoint();      // Delta^{-~}(z)
  return nabla_factor(model, ws, z).value * ch.L * Ht * Dit;
}

CMatrix nehari_response(const NehariConstants& nh, Complex z) {
  const CMatrix GNc = nh.G_N.cast<Complex>();
  return nh.Pi_tilde.cast<Complex>() *
         (GNc + nh.F_N.cast<Complex>() * resolvent_apply(nh.F_N, GNc, z));
}

CMatrix regret_filter_factored(const StateSpaceModel& model, const GammaWorkspace& ws,
                               const NehariConstants& nh, double omega) {
  const Complex z = unit_point(omega);
  const CMatrix KN = nehari_response(nh, z);
  const CausalSplit split = causal_anticausal_split(model, ws, z);
  const FactorPair nabla = nabla_factor(model, ws, z);
  const FactorPair delta = delta_factor(model, ws.p, z);
  const CMatrix KH2 = eval_transfer(kalman_filter(model, ws.p), z);
  return nabla.inverse * (KN + split.S_tail) * delta.inverse + KH2;
}

}  // namespace regret
