#include "regret/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "regret/analysis.hpp"
#include "regret/error.hpp"

namespace regret {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

Matrix lower_inverse(const Matrix& S) {
  return S.triangularView<Eigen::Lower>().solve(identity(S.rows()));
}

bool is_degenerate(const StateSpaceModel& model) {
  return model.L.isZero(0.0) || model.G.isZero(0.0);
}

}  // namespace

RiccatiSolution riccati_p(const StateSpaceModel& model) {
  model.validate();
  const auto m = model.observations();
  return solve_dare({model.F, model.H.transpose(), model.G * model.G.transpose(),
                     identity(m), DareForm::Estimation});
}

RiccatiSolution riccati_w(const StateSpaceModel& model, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::InvalidArgument, "riccati_w: gamma must be positive");
  }
  const auto q = model.disturbances();
  const Matrix cost = model.H.transpose() * model.H +
                      model.L.transpose() * model.L / (gamma * gamma);
  return solve_dare({model.F, model.G, symmetrize(cost), identity(q), DareForm::Control});
}

RiccatiSolution riccati_q(const StateSpaceModel& model, double gamma,
                          const RiccatiSolution& w) {
  const auto p = model.signals();
  const Matrix cost = -model.G * w.innovation.fullPivLu().solve(model.G.transpose());
  RiccatiSolution q = solve_dare({w.closed_loop, model.L.transpose(), symmetrize(cost),
                                  gamma * gamma * identity(p), DareForm::Estimation});
  if (q.innovation_sqrt.size() == 0) {
    throw Error(ErrorCode::IndefiniteRQ, "riccati_q: R_Q = gamma^2 I + LQL' is not positive definite");
  }
  return q;
}

Matrix lyapunov_u(const StateSpaceModel& model, const RiccatiSolution& p,
                  const RiccatiSolution& q) {
  const Matrix FPt = p.closed_loop.transpose();
  return solve_sylvester_stein(q.closed_loop, FPt, q.gain * model.L * p.X * FPt);
}

Matrix gramian_pi(const StateSpaceModel& model, const RiccatiSolution& p) {
  const Matrix forcing =
      model.H.transpose() * p.innovation.llt().solve(model.H);
  return solve_stein(p.closed_loop.transpose(), symmetrize(forcing));
}

Matrix gramian_z(const StateSpaceModel& model, const RiccatiSolution& p,
                 const RiccatiSolution& q, const Matrix& U) {
  const Matrix M = model.L * (p.X - U) * p.closed_loop.transpose();  // p x n
  const Matrix forcing = M.transpose() * q.innovation.llt().solve(M);
  return solve_stein(p.closed_loop, symmetrize(forcing));
}

GammaWorkspace make_workspace(const StateSpaceModel& model, const RiccatiSolution& p,
                              double gamma) {
  GammaWorkspace ws;
  ws.gamma = gamma;
  ws.p = p;
  ws.w = riccati_w(model, gamma);
  ws.q = riccati_q(model, gamma, ws.w);
  ws.U = lyapunov_u(model, ws.p, ws.q);
  ws.Pi = gramian_pi(model, ws.p);
  ws.Z = gramian_z(model, ws.p, ws.q, ws.U);
  // Z Pi is similar to the PSD matrix Pi^{1/2} Z Pi^{1/2}, so its spectral
  // radius is the largest singular value of the symmetric form.
  ws.sigma = spectral_radius(ws.Z * ws.Pi);
  return ws;
}

ExistenceCheck existence_check(const StateSpaceModel& model, const RiccatiSolution& p,
                               double gamma) {
  ExistenceCheck out;
  try {
    const GammaWorkspace ws = make_workspace(model, p, gamma);
    out.sigma = ws.sigma;
    out.solved = true;
    out.pass = ws.sigma <= 1.0;
  } catch (const Error& e) {
    out.solved = false;
    out.pass = false;
    out.failure = std::string(to_string(e.code())) + ": " + e.what();
  }
  return out;
}

ExistenceCheck existence_check(const StateSpaceModel& model, double gamma) {
  return existence_check(model, riccati_p(model), gamma);
}

namespace {

GammaProbe probe(const StateSpaceModel& model, const RiccatiSolution& p, double gamma) {
  const ExistenceCheck c = existence_check(model, p, gamma);
  return {gamma, c.sigma, c.solved, c.pass};
}

void check_monotone(const std::vector<GammaProbe>& record) {
  double lowest_pass = std::numeric_limits<double>::infinity();
  double highest_fail = 0.0;
  for (const auto& r : record) {
    if (r.pass) lowest_pass = std::min(lowest_pass, r.gamma);
    else highest_fail = std::max(highest_fail, r.gamma);
  }
  if (highest_fail > lowest_pass) {
    std::ostringstream msg;
    msg << "find_gamma_star: existence condition not monotone (pass at " << lowest_pass
        << ", fail at " << highest_fail << ")";
    throw Error(ErrorCode::BracketFailure, msg.str());
  }
}

}  // namespace

GammaSearch find_gamma_star(const StateSpaceModel& model, const SynthesisOptions& options) {
  if (!(options.tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "find_gamma_star: tol must be positive");
  }
  model.validate();
  const RiccatiSolution p = riccati_p(model);
  const LtiFilter kalman = kalman_filter(model, p);
  const double kalman_regret = regret_norm(model, response_of(kalman)).value;
  if (!(kalman_regret > 0.0)) {
    throw Error(ErrorCode::BracketFailure,
                "find_gamma_star: Kalman regret is zero; nothing to bracket");
  }

  GammaSearch out;
  auto& record = out.record;

  // The Kalman filter achieves its own regret, so gamma = sqrt(regret) is
  // feasible up to grid resolution; widen slightly until the check passes.
  double hi = std::sqrt(kalman_regret) * (1.0 + 1e-6);
  GammaProbe top = probe(model, p, hi);
  record.push_back(top);
  for (int k = 0; k < 20 && !top.pass; ++k) {
    hi *= 1.05;
    top = probe(model, p, hi);
    record.push_back(top);
  }
  if (!top.pass) {
    throw Error(ErrorCode::BracketFailure, "find_gamma_star: upper bracket is infeasible");
  }

  const double floor = options.floor_ratio * hi;
  const GammaProbe bottom = probe(model, p, floor);
  record.push_back(bottom);
  double lo = floor;
  if (bottom.pass) {
    check_monotone(record);
    out.gamma_star = floor;
    out.workspace = make_workspace(model, p, floor);
    return out;
  }

  // Coarse log-spaced scan tightens the bracket and exercises monotonicity.
  const int scan = std::max(options.scan_points, 0);
  for (int k = 1; k <= scan; ++k) {
    const double g = floor * std::pow(hi / floor, static_cast<double>(k) / (scan + 1));
    record.push_back(probe(model, p, g));
  }
  check_monotone(record);
  for (const auto& r : record) {
    if (r.pass) hi = std::min(hi, r.gamma);
    else lo = std::max(lo, r.gamma);
  }

  auto sigma_at = [&](double g) {
    for (auto it = record.rbegin(); it != record.rend(); ++it)
      if (it->gamma == g) return it->sigma;
    return 0.0;
  };

  for (int it = 0; it < options.max_iterations; ++it) {
    if (sigma_at(hi) >= 1.0 - options.tol) break;
    if (hi / lo - 1.0 < 1e-15) break;
    const double mid = std::sqrt(lo * hi);
    const GammaProbe r = probe(model, p, mid);
    record.push_back(r);
    if (r.pass) hi = mid;
    else lo = mid;
  }
  check_monotone(record);
  if (sigma_at(hi) < 1.0 - options.tol) {
    std::ostringstream msg;
    msg << "find_gamma_star: bisection ended at gamma = " << hi << " with sigma = "
        << sigma_at(hi) << " (boundary set by solver failure, not by the condition)";
    throw Error(ErrorCode::BracketFailure, msg.str());
  }
  out.gamma_star = hi;
  out.workspace = make_workspace(model, p, hi);
  return out;
}

NehariConstants nehari_constants(const StateSpaceModel& model, const GammaWorkspace& ws) {
  const auto n = model.states();
  const Matrix& FP = ws.p.closed_loop;
  const Matrix Rhi = lower_inverse(ws.p.innovation_sqrt);   // Re^{-1/2}
  const Matrix RQhi = lower_inverse(ws.q.innovation_sqrt);  // R_Q^{-1/2}

  const Matrix pencil = identity(n) - FP * ws.Z * FP.transpose() * ws.Pi;
  const Eigen::FullPivLU<Matrix> lu(pencil);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) {
    throw Error(ErrorCode::SingularPencil, "nehari_constants: I - F_P Z F_P' Pi is singular");
  }
  NehariConstants out;
  out.G_N = lu.solve(FP * ws.Z * model.H.transpose() * Rhi.transpose());
  out.F_N = FP - out.G_N * Rhi * model.H;
  out.Pi_tilde = RQhi * model.L * (ws.p.X - ws.U) * FP.transpose() * ws.Pi;
  if (spectral_radius(out.F_N) >= 1.0) {
    throw Error(ErrorCode::SingularPencil, "nehari_constants: F_N is not stable");
  }
  return out;
}

LtiFilter assemble_regret_filter(const StateSpaceModel& model, const GammaWorkspace& ws,
                                 const NehariConstants& nh) {
  const auto n = model.states();
  const auto m = model.observations();
  const auto p = model.signals();
  const Matrix& P = ws.p.X;
  const Matrix& FP = ws.p.closed_loop;
  const Matrix& FW = ws.w.closed_loop;
  const Matrix& KP = ws.p.gain;
  const Matrix& KQ = ws.q.gain;
  const Matrix& H = model.H;
  const Matrix& L = model.L;
  const Matrix Rhi = lower_inverse(ws.p.innovation_sqrt);
  const Matrix Rei = ws.p.innovation.llt().solve(identity(m));
  const Matrix& RQh = ws.q.innovation_sqrt;

  const Matrix PUH = (P - ws.U) * H.transpose() * Rei;       // n x m
  const Matrix nehari_ff = RQh * nh.Pi_tilde * nh.G_N * Rhi;  // p x m
  const Matrix UH = ws.U * H.transpose() * Rei;               // n x m

  LtiFilter f;
  f.A = Matrix::Zero(3 * n, 3 * n);
  f.A.block(0, 0, n, n) = FP;
  f.A.block(n, 0, n, n) = -nh.G_N * Rhi * H;
  f.A.block(n, n, n, n) = nh.F_N;
  f.A.block(2 * n, 0, n, n) = FW * UH * H - KQ * nehari_ff * H;
  f.A.block(2 * n, n, n, n) = KQ * RQh * nh.Pi_tilde * nh.F_N;
  f.A.block(2 * n, 2 * n, n, n) = FW;

  f.B.resize(3 * n, m);
  f.B.middleRows(0, n) = KP;
  f.B.middleRows(n, n) = nh.G_N * Rhi;
  f.B.middleRows(2 * n, n) = KQ * nehari_ff - FW * UH;

  f.C.resize(p, 3 * n);
  f.C.middleCols(0, n) = L - L * PUH * H - nehari_ff * H;
  f.C.middleCols(n, n) = RQh * nh.Pi_tilde * nh.F_N;
  f.C.middleCols(2 * n, n) = L;

  f.D = L * PUH + nehari_ff;
  return f;
}

SynthesisResult synthesize(const StateSpaceModel& model, const SynthesisOptions& options) {
  model.validate();
  SynthesisResult out;
  const auto n = model.states();
  const auto m = model.observations();
  const auto p = model.signals();
  out.p = riccati_p(model);
  out.kalman = kalman_filter(model, out.p);

  if (is_degenerate(model)) {
    out.degenerate = true;
    out.gamma_star = 0.0;
    out.filter = LtiFilter::zero(3 * n, m, p);
    out.filter.A.topLeftCorner(n, n) = out.p.closed_loop;
    out.filter.A.block(n, n, n, n) = out.p.closed_loop;
    out.filter.A.bottomRightCorner(n, n) = out.p.closed_loop;
    return out;
  }

  GammaSearch search = find_gamma_star(model, options);
  out.record = std::move(search.record);
  out.gamma_star = search.gamma_star;
  try {
    out.nehari = nehari_constants(model, search.workspace);
    out.workspace = std::move(search.workspace);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularPencil) throw;
    // At sigma = 1 exactly the pencil degenerates; step gamma up once.
    out.gamma_star *= 1.0 + options.tol;
    GammaWorkspace ws = make_workspace(model, out.p, out.gamma_star);
    out.nehari = nehari_constants(model, ws);
    out.workspace = std::move(ws);
  }
  out.filter = assemble_regret_filter(model, *out.workspace, *out.nehari);
  return out;
}

LtiFilter kalman_filter(const StateSpaceModel& model, const RiccatiSolution& p) {
  const auto n = model.states();
  const auto m = model.observations();
  const Matrix Rei = p.innovation.llt().solve(identity(m));
  const Matrix PHR = p.X * model.H.transpose() * Rei;  // n x m
  return {p.closed_loop, p.gain, model.L * (identity(n) - PHR * model.H), model.L * PHR};
}

LtiFilter kalman_filter(const StateSpaceModel& model) {
  return kalman_filter(model, riccati_p(model));
}

CMatrix noncausal_response(const StateSpaceModel& model, Complex z) {
  const PlantChannels ch = eval_plant_channels(model, z);
  const PlantChannels adj = eval_plant_channels(model, 1.0 / std::conj(z));
  const CMatrix Ht = adj.H.adjoint();  // H~(z), q x m
  const auto m = model.observations();
  const CMatrix M = CMatrix::Identity(m, m) + ch.H * Ht;
  // (I + H H~) is positive definite on the circle; solve from the right.
  return M.transpose().partialPivLu().solve((ch.L * Ht).transpose()).transpose();
}

}  // namespace regret
