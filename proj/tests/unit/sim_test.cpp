#include "regret/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "regret/analysis.hpp"
#include "regret/baselines.hpp"
#include "regret/error.hpp"
#include "regret/models.hpp"
#include "regret/synthesis.hpp"
#include "test_support.hpp"

namespace regret {
namespace {

class ScalarFilters : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto m = scalar_model();
    const auto r = synthesize(m);
    filters_ = new std::vector<NamedFilter>{
        {"h2", r.kalman}, {"hinf", hinf_optimal(m).filter}, {"regret_opt", r.filter}};
  }
  static void TearDownTestSuite() { delete filters_; }
  static std::vector<NamedFilter>* filters_;
};

std::vector<NamedFilter>* ScalarFilters::filters_ = nullptr;

TEST(CounterRng, KnownSplitMixOutputAndMoments) {
  // SplitMix64 reference: seed 0 yields 0xE220A8397B1DCDAF first.
  EXPECT_EQ(CounterRng(0).bits(0), 0xE220A8397B1DCDAFULL);
  const CounterRng rng(42);
  double sum = 0.0;
  double sq = 0.0;
  const int n = 200000;
  for (int j = 0; j < n; ++j) {
    const double x = rng.normal(j);
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
  for (std::uint64_t k = 0; k < 1000; ++k) {
    EXPECT_GT(rng.uniform(k), 0.0);
    EXPECT_LE(rng.uniform(k), 1.0);
  }
}

TEST_F(ScalarFilters, UnforcedSystemHasZeroError) {
  const auto m = scalar_model();
  const DisturbanceTrace zero{Matrix::Zero(1, 50), Matrix::Zero(1, 50)};
  const auto r = simulate(m, *filters_, {.kind = DisturbanceKind::Custom, .horizon = 50}, &zero);
  for (const auto& run : r.runs) EXPECT_EQ(run.errors.squaredNorm(), 0.0);
}

TEST_F(ScalarFilters, Deterministic) {
  const auto m = scalar_model();
  const DisturbanceSpec spec{.kind = DisturbanceKind::Gaussian, .horizon = 2000, .seed = 9};
  const auto a = simulate(m, *filters_, spec);
  const auto b = simulate(m, *filters_, spec);
  for (std::size_t i = 0; i < a.runs.size(); ++i) EXPECT_EQ(a.runs[i].running_avg, b.runs[i].running_avg);
  std::ostringstream x, y;
  export_running_averages(a, x);
  export_running_averages(b, y);
  EXPECT_EQ(x.str(), y.str());
  EXPECT_EQ(x.str().substr(0, x.str().find('\n')), "t,avg_h2,avg_hinf,avg_regret_opt");
}

TEST_F(ScalarFilters, GaussianPlateauMatchesFrobenius) {
  const auto m = scalar_model();
  const auto r = simulate(m, *filters_, {.kind = DisturbanceKind::Gaussian, .horizon = 100000, .seed = 1});
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const double frob = frobenius_norm_sq(m, response_of((*filters_)[i].filter));
    EXPECT_NEAR(r.runs[i].running_avg.back(), frob, 0.05 * frob) << r.runs[i].name;
    EXPECT_NEAR(plateau_average(r.runs[i], r.burn_in), frob, 0.05 * frob) << r.runs[i].name;
  }
  EXPECT_LT(r.runs[0].running_avg.back(), r.runs[1].running_avg.back());
  EXPECT_LT(r.runs[0].running_avg.back(), r.runs[2].running_avg.back());
}

TEST_F(ScalarFilters, AdversarialFavoursHinf) {
  const auto m = scalar_model();
  const auto r = simulate(m, *filters_, {.kind = DisturbanceKind::Adversarial, .horizon = 10000});
  const double h2 = r.runs[0].running_avg.back();
  const double hinf = r.runs[1].running_avg.back();
  const double reg = r.runs[2].running_avg.back();
  EXPECT_LT(hinf, h2);
  EXPECT_LT(hinf, reg);
  EXPECT_LT(reg, h2);
}

TEST_F(ScalarFilters, WorstCaseGainApproachesOperatorNorm) {
  const auto m = scalar_model();
  for (const auto& f : *filters_) {
    const double op = operator_norm_sq(m, response_of(f.filter)).value;
    const auto trace = worst_case_disturbance(m, f.filter, 10000);
    EXPECT_NEAR(trace.energy() / 10000.0, 1.0, 1e-12);
    const double gain = energy_gain(run_filter(m, f, trace));
    EXPECT_LE(gain, op * 1.02) << f.name;
    EXPECT_GE(gain, op * 0.98) << f.name;
  }
}

TEST_F(ScalarFilters, GaussianGainBoundedByOperatorNorm) {
  const auto m = scalar_model();
  const auto trace = gaussian_disturbance(m, 10000, 5);
  for (const auto& f : *filters_) {
    const double op = operator_norm_sq(m, response_of(f.filter)).value;
    EXPECT_LE(energy_gain(run_filter(m, f, trace)), op * 1.02);
  }
}

TEST(WorstCase, KalmanPeakAtLowFrequency) {
  const auto m = scalar_model();
  const double w = operator_norm_sq(m, response_of(kalman_filter(m))).argmax_omega;
  EXPECT_LT(std::min(w, 2 * std::numbers::pi - w), 0.5);
}

TEST(WorstCase, StaticGainMatchesSingularValue) {
  const auto m = scalar_model();
  const NamedFilter f{"static", LtiFilter::static_gain(Matrix::Constant(1, 1, 0.5))};
  const double w = operator_norm_sq(m, response_of(f.filter)).argmax_omega;
  const double sigma = max_singular_value(error_operator_sample(m, f.filter, w));
  const double gain = energy_gain(run_filter(m, f, worst_case_disturbance(m, f.filter, 100000)));
  EXPECT_NEAR(gain, sigma * sigma, 0.01 * sigma * sigma);
}

TEST(WorstCase, HorizonOne) {
  const auto m = scalar_model();
  const NamedFilter f{"h2", kalman_filter(m)};
  const auto trace = worst_case_disturbance(m, f.filter, 1);
  EXPECT_EQ(trace.horizon(), 1u);
  EXPECT_NEAR(trace.energy(), 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(energy_gain(run_filter(m, f, trace))));
}

TEST(Simulate, RejectsBadInput) {
  const auto m = scalar_model();
  const std::vector<NamedFilter> ok = {{"h2", kalman_filter(m)}};
  EXPECT_THROW(simulate(m, ok, {.horizon = 0}), Error);
  const std::vector<NamedFilter> wrong = {{"bad", LtiFilter::zero(1, 2, 1)}};
  try {
    simulate(m, wrong, {.horizon = 10});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
  EXPECT_THROW(simulate(m, ok, {.kind = DisturbanceKind::Custom, .horizon = 10}), Error);
}

TEST(Simulate, BurnIn) {
  const std::vector<NamedFilter> f = {{"a", LtiFilter{Matrix::Constant(1, 1, 0.5), Matrix::Ones(1, 1),
                                                      Matrix::Ones(1, 1), Matrix::Zero(1, 1)}}};
  EXPECT_EQ(burn_in_steps(f), 20u);
}

}  // namespace
}  // namespace regret
