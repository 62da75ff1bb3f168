#include "regret/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "regret/error.hpp"

namespace regret {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorCode::SingularInnovation: return "SingularInnovation";
    case ErrorCode::UnstableOperator: return "UnstableOperator";
    case ErrorCode::UnstablePair: return "UnstablePair";
    case ErrorCode::SingularResolvent: return "SingularResolvent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndefiniteRQ: return "IndefiniteRQ";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::SingularPencil: return "SingularPencil";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::NonConvergedQuadrature: return "NonConvergedQuadrature";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

constexpr double kStabilityMargin = 1e-9;

void check_problem(const DareProblem& p) {
  const auto n = p.A.rows();
  const auto q = p.B.cols();
  if (n == 0 || p.A.cols() != n || p.B.rows() != n || p.C_cost.rows() != n ||
      p.C_cost.cols() != n || p.R0.rows() != q || p.R0.cols() != q) {
    throw Error(ErrorCode::DimensionMismatch, "solve_dare: inconsistent dimensions");
  }
  if (!p.A.allFinite() || !p.B.allFinite() || !p.C_cost.allFinite() ||
      !p.R0.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "solve_dare: non-finite input");
  }
  auto asym = [](const Matrix& M) {
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    return (M - M.transpose()).cwiseAbs().maxCoeff() / scale;
  };
  if (asym(p.C_cost) > 1e-12 || asym(p.R0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "solve_dare: C_cost and R0 must be symmetric");
  }
}

// Both orientations reduce to the control form with A replaced by A'.
Matrix control_A(const DareProblem& p) {
  return p.form == DareForm::Control ? p.A : Matrix(p.A.transpose());
}

Matrix riccati_map(const Matrix& A, const Matrix& B, const Matrix& C,
                   const Matrix& R0, const Matrix& X) {
  const Matrix BtXA = B.transpose() * X * A;
  const Matrix Re = R0 + B.transpose() * X * B;
  return A.transpose() * X * A + C - BtXA.transpose() * Re.fullPivLu().solve(BtXA);
}

std::optional<Matrix> doubling(const Matrix& A, const Matrix& B, const Matrix& C,
                               const Matrix& R0, const SolverOptions& opt,
                               int& iterations) {
  const auto n = A.rows();
  const Eigen::FullPivLU<Matrix> r0_lu(R0);
  if (!r0_lu.isInvertible()) return std::nullopt;

  Matrix Ak = A;
  Matrix Gk = B * r0_lu.solve(B.transpose());
  Matrix Hk = C;
  const Matrix I = Matrix::Identity(n, n);
  // Doubling converges quadratically; a few dozen steps cover any closed-loop
  // radius not within machine precision of the unit circle.
  const int cap = std::min(opt.max_iterations, 200);
  for (int k = 0; k < cap; ++k) {
    const Eigen::PartialPivLU<Matrix> W(I + Gk * Hk);
    const Matrix WA = W.solve(Ak);
    const Matrix WG = W.solve(Gk);
    Matrix Hn = Hk + Ak.transpose() * Hk * WA;
    Matrix Gn = Gk + Ak * WG * Ak.transpose();
    Matrix An = Ak * WA;
    Hn = symmetrize(Hn);
    Gn = symmetrize(Gn);
    if (!Hn.allFinite() || !Gn.allFinite() || !An.allFinite()) return std::nullopt;
    const double delta = (Hn - Hk).norm();
    const double scale = std::max(Hn.norm(), 1e-300);
    Hk = std::move(Hn);
    Gk = std::move(Gn);
    Ak = std::move(An);
    iterations = k + 1;
    if (delta <= opt.tolerance * scale || Hk.norm() == 0.0) return Hk;
  }
  return std::nullopt;
}

std::optional<Matrix> fixed_point(const Matrix& A, const Matrix& B, const Matrix& C,
                                  const Matrix& R0, const SolverOptions& opt,
                                  int& iterations) {
  Matrix X = Matrix::Zero(A.rows(), A.cols());
  for (int k = 0; k < opt.max_iterations; ++k) {
    Matrix Xn = symmetrize(riccati_map(A, B, C, R0, X));
    if (!Xn.allFinite()) return std::nullopt;
    const double delta = (Xn - X).norm();
    const double scale = std::max(Xn.norm(), 1e-300);
    X = std::move(Xn);
    iterations = k + 1;
    if (delta <= opt.tolerance * scale || X.norm() == 0.0) return X;
  }
  return std::nullopt;
}

// Fills gain/closed loop for a candidate; false if it is not stabilizing.
bool finish(const DareProblem& p, const Matrix& X, RiccatiSolution& out,
            const SolverOptions& opt) {
  const Matrix Re = symmetrize(p.R0 + p.B.transpose() * X * p.B);
  const Eigen::FullPivLU<Matrix> lu(Re);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::SingularInnovation, "solve_dare: R0 + B'XB is singular");
  }
  out.X = X;
  out.innovation = Re;
  if (p.form == DareForm::Control) {
    out.gain = lu.solve(p.B.transpose() * X * p.A);
    out.closed_loop = p.A - p.B * out.gain;
  } else {
    out.gain = p.A * X * p.B * lu.inverse();
    out.closed_loop = p.A - out.gain * p.B.transpose();
  }
  const Eigen::LLT<Matrix> llt(Re);
  out.innovation_sqrt = llt.info() == Eigen::Success ? Matrix(llt.matrixL()) : Matrix();
  out.residual = dare_residual(p, X);
  return spectral_radius(out.closed_loop) < 1.0 - kStabilityMargin &&
         out.residual <= opt.residual_tolerance;
}

}  // namespace

double dare_residual(const DareProblem& p, const Matrix& X) {
  const Matrix A = control_A(p);
  const Matrix diff = X - riccati_map(A, p.B, p.C_cost, p.R0, X);
  const double num = diff.norm();
  if (num == 0.0) return 0.0;
  const double den = std::max({X.norm(), p.C_cost.norm(), 1e-300});
  return num / den;
}

RiccatiSolution solve_dare(const DareProblem& problem, const SolverOptions& options) {
  check_problem(problem);
  const Matrix A = control_A(problem);
  RiccatiSolution out;

  int iterations = 0;
  if (auto X = doubling(A, problem.B, problem.C_cost, problem.R0, options, iterations)) {
    if (finish(problem, *X, out, options)) {
      out.iterations = iterations;
      return out;
    }
  }
  iterations = 0;
  if (auto X = fixed_point(A, problem.B, problem.C_cost, problem.R0, options, iterations)) {
    if (finish(problem, *X, out, options)) {
      out.iterations = iterations;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "solve_dare: no stabilizing solution (" << problem.A.rows() << " states)";
  throw Error(ErrorCode::NoStabilizingSolution, msg.str());
}

Matrix solve_stein(const Matrix& A, const Matrix& C) {
  if (A.rows() != A.cols() || C.rows() != A.rows() || C.cols() != A.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "solve_stein: dimension mismatch");
  }
  if (spectral_radius(A) >= 1.0 - kStabilityMargin) {
    throw Error(ErrorCode::UnstableOperator, "solve_stein: spectral radius of A >= 1");
  }
  Matrix X = solve_sylvester_stein(A, A.transpose(), C);
  if ((C - C.transpose()).cwiseAbs().maxCoeff() <=
      1e-14 * std::max(1.0, C.cwiseAbs().maxCoeff())) {
    X = symmetrize(X);
  }
  return X;
}

Matrix solve_sylvester_stein(const Matrix& A, const Matrix& B, const Matrix& C) {
  const auto na = A.rows();
  const auto nb = B.rows();
  if (A.cols() != na || B.cols() != nb || C.rows() != na || C.cols() != nb) {
    throw Error(ErrorCode::DimensionMismatch, "solve_sylvester_stein: dimension mismatch");
  }
  if (spectral_radius(A) * spectral_radius(B) >= 1.0 - kStabilityMargin) {
    throw Error(ErrorCode::UnstablePair, "solve_sylvester_stein: rho(A) rho(B) >= 1");
  }
  if (C.isZero(0.0)) return Matrix::Zero(na, nb);

  if (na <= 8 && nb <= 8) {
    // vec(AXB) = (B' kron A) vec(X)
    const auto N = na * nb;
    Matrix K = Matrix::Identity(N, N);
    for (Eigen::Index i = 0; i < nb; ++i)
      for (Eigen::Index j = 0; j < nb; ++j)
        K.block(j * na, i * na, na, na) -= B(i, j) * A;
    const Vector rhs = Eigen::Map<const Vector>(C.data(), N);
    const Vector x = K.fullPivLu().solve(rhs);
    return Eigen::Map<const Matrix>(x.data(), na, nb);
  }

  // Complex Schur forms A = Ua Ta Ua*, B = Ub Tb Ub*; Y = Ua* X Ub satisfies
  // Y = Ta Y Tb + Ua* C Ub, solved one column at a time.
  const Eigen::ComplexSchur<Matrix> sa(A);
  const Eigen::ComplexSchur<Matrix> sb(B);
  const CMatrix& Ta = sa.matrixT();
  const CMatrix& Tb = sb.matrixT();
  const CMatrix& Ua = sa.matrixU();
  const CMatrix& Ub = sb.matrixU();
  const CMatrix Ct = Ua.adjoint() * C.cast<Complex>() * Ub;
  CMatrix Y = CMatrix::Zero(na, nb);
  CMatrix I = CMatrix::Identity(na, na);
  for (Eigen::Index j = 0; j < nb; ++j) {
    CVector acc = CVector::Zero(na);
    for (Eigen::Index l = 0; l < j; ++l) acc += Y.col(l) * Tb(l, j);
    const CVector rhs = Ct.col(j) + Ta * acc;
    const CMatrix lhs = I - Tb(j, j) * Ta;
    Y.col(j) = lhs.triangularView<Eigen::Upper>().solve(rhs);
  }
  return (Ua * Y * Ub.adjoint()).real();
}

double max_singular_value(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(M).singularValues()(0);
}

double max_singular_value(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(M).singularValues()(0);
}

double spectral_radius(const Matrix& M) {
  if (M.size() == 0) return 0.0;
  const Eigen::EigenSolver<Matrix> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double hermitian_norm(const CMatrix& M) {
  if (M.size() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(M, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Matrix cholesky_lower(const Matrix& M) {
  const Eigen::LLT<Matrix> llt(symmetrize(M));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularInnovation, "cholesky_lower: matrix is not positive definite");
  }
  return llt.matrixL();
}

double relative_difference(const Matrix& a, const Matrix& b) {
  const double num = (a - b).norm();
  if (num == 0.0) return 0.0;
  return num / std::max({a.norm(), b.norm(), 1e-300});
}

}  // namespace regret
