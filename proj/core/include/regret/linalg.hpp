#pragma once

// Dense solvers for the matrix equations that appear in filter synthesis:
// discrete algebraic Riccati equations, Stein (discrete Lyapunov) and
// two-sided Sylvester-Stein equations, plus a few spectral helpers.

#include <Eigen/Dense>

#include <complex>

namespace regret {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Orientation of a Riccati equation.
///
/// Control:    X = A'XA + C - A'XB (R0 + B'XB)^-1 B'XA,  gain (R0+B'XB)^-1 B'XA,
///             closed loop A - B*gain.
/// Estimation: X = AXA' + C - AXB (R0 + B'XB)^-1 B'XA',  gain AXB (R0+B'XB)^-1,
///             closed loop A - gain*B'.
///
/// In estimation form B is the transposed output map (n x m), so both forms
/// share the same DareProblem shape.
enum class DareForm { Control, Estimation };

struct DareProblem {
  Matrix A;       // n x n
  Matrix B;       // n x q
  Matrix C_cost;  // n x n, symmetric (may be indefinite)
  Matrix R0;      // q x q, symmetric (may be indefinite)
  DareForm form = DareForm::Estimation;
};

struct RiccatiSolution {
  Matrix X;             // stabilizing solution, symmetric
  Matrix gain;          // q x n (control) or n x q (estimation)
  Matrix innovation;    // R0 + B'XB
  Matrix innovation_sqrt;  // lower Cholesky factor of `innovation`; empty when indefinite
  Matrix closed_loop;   // n x n, spectral radius < 1
  double residual = 0.0;   // relative Frobenius residual of the defining equation
  int iterations = 0;
};

struct SolverOptions {
  double tolerance = 1e-13;   // relative update
  int max_iterations = 10000;
  double residual_tolerance = 1e-10;
};

/// Stabilizing solution of a DARE. Structure-preserving doubling first,
/// fixed-point iteration from zero as a fallback.
///
/// Throws Error(NoStabilizingSolution) if neither method converges to a
/// solution whose closed loop is strictly stable, and
/// Error(SingularInnovation) if R0 + B'XB is singular at the solution.
RiccatiSolution solve_dare(const DareProblem& problem,
                           const SolverOptions& options = {});

/// Relative Frobenius residual of X in the defining equation of `problem`.
double dare_residual(const DareProblem& problem, const Matrix& X);

/// Solves X = A X A' + C. Requires spectral_radius(A) < 1 - 1e-9.
Matrix solve_stein(const Matrix& A, const Matrix& C);

/// Solves X = A X B + C for rectangular X (rows(A) x cols(B)).
/// Requires spectral_radius(A) * spectral_radius(B) < 1 - 1e-9.
///
/// Kronecker-vectorized solve when both A and B have at most 8 rows,
/// complex-Schur back-substitution otherwise.
Matrix solve_sylvester_stein(const Matrix& A, const Matrix& B, const Matrix& C);

double max_singular_value(const Matrix& M);
double max_singular_value(const CMatrix& M);
double spectral_radius(const Matrix& M);

/// Largest absolute eigenvalue of a Hermitian matrix (its operator norm).
double hermitian_norm(const CMatrix& M);

/// Lower Cholesky factor S with S S' = M; throws SingularInnovation if M is
/// not positive definite.
Matrix cholesky_lower(const Matrix& M);

double relative_difference(const Matrix& a, const Matrix& b);

inline Matrix symmetrize(const Matrix& M) { return 0.5 * (M + M.transpose()); }

}  // namespace regret
