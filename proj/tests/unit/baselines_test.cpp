#include "regret/baselines.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "regret/analysis.hpp"
#include "regret/error.hpp"
#include "regret/models.hpp"
#include "regret/synthesis.hpp"
#include "test_support.hpp"

namespace regret {
namespace {

TEST(HinfFilter, LargeLevelRecoversKalman) {
  for (const auto& m : {scalar_model(), tracking_model(1.0)}) {
    const LtiFilter h = hinf_filter(m, 1e6);
    const LtiFilter k = kalman_filter(m);
    EXPECT_LE((h.A - k.A).norm(), 1e-6);
    EXPECT_LE((h.D - k.D).norm(), 1e-6);
  }
}

TEST(HinfFilter, InfeasibleBelowOptimum) {
  try {
    hinf_filter(scalar_model(), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(HinfFilter, MeetsRequestedLevel) {
  const auto m = scalar_model();
  for (double level : {1.0, 1.05, 1.2}) {
    const double op = operator_norm_sq(m, response_of(hinf_filter(m, level))).value;
    EXPECT_LE(op, level * level + 1e-6);
  }
}

TEST(HinfOptimal, ScalarMatchesNoncausalPeak) {
  const auto m = scalar_model();
  const auto r = hinf_optimal(m);
  const double peak0 = operator_norm_sq(m, noncausal_estimator(m)).value;
  EXPECT_NEAR(r.level_star * r.level_star, 0.99, 0.02);
  EXPECT_NEAR(r.level_star * r.level_star, peak0, 1e-4);
  const double measured = operator_norm_sq(m, response_of(r.filter)).value;
  EXPECT_LE(std::sqrt(measured), r.level_star * (1.0 + 1e-5));
}

TEST(HinfOptimal, TrackingLevel) {
  const auto r = hinf_optimal(tracking_model(1.0));
  EXPECT_NEAR(r.level_star * r.level_star, 1.0, 0.03);
}

TEST(HinfOptimal, SignalFreeLevelIsZero) {
  StateSpaceModel m = scalar_model();
  m.L.setZero();
  EXPECT_EQ(hinf_optimal(m).level_star, 0.0);
}

TEST(HinfOptimal, FeasibilityMonotoneAcrossRecord) {
  const auto r = hinf_optimal(tracking_model(1.0));
  double lowest_ok = INFINITY;
  double highest_bad = 0.0;
  for (const auto& p : r.record) {
    if (p.feasible) lowest_ok = std::min(lowest_ok, p.level);
    else highest_bad = std::max(highest_bad, p.level);
  }
  EXPECT_LE(highest_bad, lowest_ok);
  EXPECT_THROW(hinf_optimal(scalar_model(), 0.0), Error);
}

}  // namespace
}  // namespace regret
