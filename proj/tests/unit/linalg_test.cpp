#include "regret/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "regret/error.hpp"
#include "test_support.hpp"

namespace regret {
namespace {

using testing::max_abs;
using testing::random_matrix;
using testing::random_stable;
using testing::stein_series;

Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

TEST(SolveDare, ScalarKalmanMatchesQuadraticRoot) {
  // P^2 - 0.81 P - 1 = 0
  const double P = (0.81 + std::sqrt(0.81 * 0.81 + 4.0)) / 2.0;
  const auto sol = solve_dare({scalar(0.9), scalar(1), scalar(1), scalar(1), DareForm::Estimation});
  EXPECT_NEAR(sol.X(0, 0), P, 1e-12);
  EXPECT_NEAR(sol.X(0, 0), 1.4839, 1e-4);
  EXPECT_NEAR(sol.gain(0, 0), 0.9 * P / (1 + P), 1e-12);
  EXPECT_NEAR(sol.gain(0, 0), 0.5377, 1e-4);
  EXPECT_NEAR(sol.closed_loop(0, 0), 0.3623, 1e-4);
  EXPECT_LE(sol.residual, 1e-10);
  ASSERT_EQ(sol.innovation_sqrt.size(), 1);
  EXPECT_NEAR(sol.innovation_sqrt(0, 0), std::sqrt(1 + P), 1e-12);
}

TEST(SolveDare, NoDynamicsReturnsCost) {
  std::mt19937_64 rng(3);
  const Matrix B = random_matrix(rng, 3, 2);
  Matrix S = random_matrix(rng, 3, 3);
  S = S * S.transpose();
  for (auto form : {DareForm::Control, DareForm::Estimation}) {
    const auto sol = solve_dare({Matrix::Zero(3, 3), B, S, Matrix::Identity(2, 2), form});
    EXPECT_LE(max_abs(sol.X - S), 1e-12);
  }
}

TEST(SolveDare, ZeroInputMatchesSteinSeries) {
  std::mt19937_64 rng(5);
  const Matrix A = random_stable(rng, 3, 0.8);
  Matrix S = random_matrix(rng, 3, 3);
  S = S * S.transpose();
  const auto sol = solve_dare({A, Matrix::Zero(3, 1), S, Matrix::Identity(1, 1), DareForm::Estimation});
  const Matrix series = stein_series(A, A.transpose(), S);
  EXPECT_LE(relative_difference(sol.X, series), 1e-10);
  EXPECT_LE(relative_difference(sol.X, solve_stein(A, S)), 1e-10);
}

TEST(SolveDare, ControlFormIsTransposedEstimationForm) {
  std::mt19937_64 rng(7);
  const Matrix A = random_matrix(rng, 4, 4);
  const Matrix B = random_matrix(rng, 4, 2);
  const Matrix C = Matrix::Identity(4, 4);
  const auto ctrl = solve_dare({A, B, C, Matrix::Identity(2, 2), DareForm::Control});
  const auto est = solve_dare({A.transpose(), B, C, Matrix::Identity(2, 2), DareForm::Estimation});
  EXPECT_LE(relative_difference(ctrl.X, est.X), 1e-10);
  EXPECT_LE(max_abs(ctrl.gain - est.gain.transpose()), 1e-9);
  EXPECT_LT(spectral_radius(ctrl.closed_loop), 1.0);
  EXPECT_LE(ctrl.residual, 1e-10);
  EXPECT_LE(dare_residual({A, B, C, Matrix::Identity(2, 2), DareForm::Control}, ctrl.X), 1e-10);
}

TEST(SolveDare, SolutionIsSymmetric) {
  std::mt19937_64 rng(11);
  const Matrix A = random_matrix(rng, 5, 5);
  const Matrix B = random_matrix(rng, 5, 2);
  const auto sol = solve_dare({A, B, Matrix::Identity(5, 5), Matrix::Identity(2, 2), DareForm::Estimation});
  EXPECT_LE(max_abs(sol.X - sol.X.transpose()), 1e-10 * std::max(1.0, sol.X.norm()));
}

TEST(SolveDare, IndefiniteCostStillStabilizes) {
  // Shape of the gamma-dependent estimation equation: negative semidefinite cost.
  Matrix A(2, 2);
  A << 0.5, 0.2, 0.0, 0.4;
  Matrix B(2, 1);
  B << 1.0, 0.5;
  const Matrix C = -0.1 * Matrix::Identity(2, 2);
  const auto sol = solve_dare({A, B, C, 4.0 * Matrix::Identity(1, 1), DareForm::Estimation});
  EXPECT_LE(sol.residual, 1e-10);
  EXPECT_LT(spectral_radius(sol.closed_loop), 1.0);
}

TEST(SolveDare, UndetectablePairThrows) {
  try {
    solve_dare({scalar(2.0), scalar(0.0), scalar(1.0), scalar(1.0), DareForm::Estimation});
    FAIL() << "expected NoStabilizingSolution";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoStabilizingSolution);
  }
}

TEST(SolveDare, RejectsMalformedInput) {
  Matrix asym(2, 2);
  asym << 1, 2, 0, 1;
  EXPECT_THROW(solve_dare({Matrix::Identity(2, 2), Matrix::Ones(2, 1), asym, scalar(1)}), Error);
  EXPECT_THROW(solve_dare({Matrix::Identity(2, 2), Matrix::Ones(3, 1), Matrix::Identity(2, 2), scalar(1)}),
               Error);
  EXPECT_THROW(solve_dare({scalar(NAN), scalar(1), scalar(1), scalar(1)}), Error);
}

TEST(SolveStein, ScalarGeometricSeries) {
  EXPECT_NEAR(solve_stein(scalar(0.5), scalar(1.0))(0, 0), 4.0 / 3.0, 1e-14);
  EXPECT_EQ(max_abs(solve_stein(scalar(0.5), scalar(0.0))), 0.0);
}

TEST(SolveStein, MatchesSeriesOracleSmallAndLarge) {
  std::mt19937_64 rng(13);
  for (int n : {1, 3, 8, 12, 20}) {
    const Matrix A = random_stable(rng, n, 0.95);
    Matrix C = random_matrix(rng, n, n);
    C = C * C.transpose();
    const Matrix X = solve_stein(A, C);
    const Matrix oracle = stein_series(A, A.transpose(), C);
    EXPECT_LE(relative_difference(X, oracle), 1e-10) << "n = " << n;
    EXPECT_LE(max_abs(X - X.transpose()), 1e-10 * X.norm()) << "n = " << n;
    EXPECT_LE((A * X * A.transpose() + C - X).norm() / X.norm(), 1e-12) << "n = " << n;
  }
}

TEST(SolveStein, UnstableThrows) {
  try {
    solve_stein(scalar(1.0), scalar(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstableOperator);
  }
}

TEST(SolveSylvesterStein, TrivialCases) {
  std::mt19937_64 rng(17);
  const Matrix B = random_matrix(rng, 2, 2);
  const Matrix C = random_matrix(rng, 3, 2);
  EXPECT_LE(max_abs(solve_sylvester_stein(Matrix::Zero(3, 3), B, C) - C), 1e-15);
  EXPECT_NEAR(solve_sylvester_stein(scalar(0.5), scalar(0.5), scalar(1.0))(0, 0), 4.0 / 3.0, 1e-14);
  EXPECT_EQ(max_abs(solve_sylvester_stein(scalar(0.5), scalar(0.5), scalar(0.0))), 0.0);
}

TEST(SolveSylvesterStein, RectangularMatchesSeries) {
  std::mt19937_64 rng(19);
  for (auto [na, nb] : {std::pair{2, 3}, std::pair{5, 1}, std::pair{10, 9}, std::pair{4, 12}}) {
    const Matrix A = random_stable(rng, na, 0.9);
    const Matrix B = random_stable(rng, nb, 0.9);
    const Matrix C = random_matrix(rng, na, nb);
    const Matrix X = solve_sylvester_stein(A, B, C);
    EXPECT_LE(relative_difference(X, stein_series(A, B, C)), 1e-10);
    EXPECT_LE((A * X * B + C - X).norm() / X.norm(), 1e-12);
  }
}

TEST(SolveSylvesterStein, UnstablePairThrows) {
  try {
    solve_sylvester_stein(scalar(2.0), scalar(0.6), scalar(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnstablePair);
  }
}

TEST(Spectral, IdentityAndNilpotent) {
  EXPECT_NEAR(max_singular_value(Matrix(Matrix::Identity(2, 2))), 1.0, 1e-15);
  EXPECT_NEAR(spectral_radius(Matrix::Identity(2, 2)), 1.0, 1e-15);
  Matrix N(2, 2);
  N << 0, 2, 0, 0;
  EXPECT_NEAR(max_singular_value(N), 2.0, 1e-15);
  EXPECT_NEAR(spectral_radius(N), 0.0, 1e-15);
}

TEST(Spectral, SingularValueMatchesPowerIteration) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix M = random_matrix(rng, 5, 5);
    EXPECT_NEAR(max_singular_value(M), testing::power_iteration_norm(M), 1e-9 * max_singular_value(M));
  }
}

TEST(Spectral, HermitianNormOfIndefiniteMatrix) {
  CMatrix M(2, 2);
  M << Complex(-3, 0), Complex(0, 1), Complex(0, -1), Complex(1, 0);
  // eigenvalues -1 +/- sqrt(5)
  EXPECT_NEAR(hermitian_norm(M), 1.0 + std::sqrt(5.0), 1e-12);
}

TEST(Cholesky, LowerFactorAndIndefiniteRejection) {
  Matrix M(2, 2);
  M << 4, 2, 2, 3;
  const Matrix S = cholesky_lower(M);
  EXPECT_LE(max_abs(S * S.transpose() - M), 1e-14);
  EXPECT_EQ(S(0, 1), 0.0);
  Matrix bad(2, 2);
  bad << 1, 0, 0, -1;
  EXPECT_THROW(cholesky_lower(bad), Error);
}

}  // namespace
}  // namespace regret
