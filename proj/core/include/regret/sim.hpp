#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "regret/linalg.hpp"
#include "regret/state_space.hpp"

namespace regret {

/// Counter-based generator. Draw k (k = 0, 1, ...) is
///   mix64(seed + (k + 1) * 0x9E3779B97F4A7C15)
/// with the SplitMix64 finalizer; uniforms take the top 53 bits. Normals use
/// Box-Muller on consecutive pairs (cosine branch only), so normal j consumes
/// uniform draws 2j and 2j+1.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t mix64(std::uint64_t x);
  std::uint64_t bits(std::uint64_t k) const;
  /// Uniform on (0, 1].
  double uniform(std::uint64_t k) const;
  double normal(std::uint64_t j) const;

 private:
  std::uint64_t seed_;
};

enum class DisturbanceKind { Gaussian, Adversarial, Custom };

struct DisturbanceSpec {
  DisturbanceKind kind = DisturbanceKind::Gaussian;
  std::size_t horizon = 1000;
  std::uint64_t seed = 0;
  double scale = 1.0;
};

/// Column t holds the sample at step t.
struct DisturbanceTrace {
  Matrix w;  // q x T
  Matrix v;  // m x T
  std::size_t horizon() const { return static_cast<std::size_t>(w.cols()); }
  double energy() const { return w.squaredNorm() + v.squaredNorm(); }
};

/// Step t draws w(0..q-1, t) then v(0..m-1, t), consecutive normal indices.
DisturbanceTrace gaussian_disturbance(const StateSpaceModel& model, std::size_t horizon,
                                      std::uint64_t seed, double scale = 1.0);

/// Real sinusoid at the peak frequency of ||T_K(e^{jw})|| along the leading
/// right singular vector, normalized to unit average energy per step.
DisturbanceTrace worst_case_disturbance(const StateSpaceModel& model, const LtiFilter& filt,
                                        std::size_t horizon);

struct NamedFilter {
  std::string name;
  LtiFilter filter;
};

struct FilterRun {
  std::string name;
  Matrix errors;                    // p x T, e_t = s_t - s^_t
  std::vector<double> running_avg;  // (1/t) sum_{i<=t} e_i' e_i
  double input_energy = 0.0;
};

struct SimResult {
  std::vector<FilterRun> runs;
  std::size_t burn_in = 0;
};

/// Zero initial plant and filter states.
FilterRun run_filter(const StateSpaceModel& model, const NamedFilter& filt,
                     const DisturbanceTrace& trace);

/// Gaussian: one shared trace. Adversarial: each filter is driven by its own
/// worst-case trace. Custom: `custom` is used for every filter.
SimResult simulate(const StateSpaceModel& model, const std::vector<NamedFilter>& filters,
                   const DisturbanceSpec& spec, const DisturbanceTrace* custom = nullptr);

/// ceil(10 / (1 - rho_max)) over the filter state matrices.
std::size_t burn_in_steps(const std::vector<NamedFilter>& filters);

/// Mean of e_t' e_t over t >= burn_in.
double plateau_average(const FilterRun& run, std::size_t burn_in);

/// Total error energy over total disturbance energy.
double energy_gain(const FilterRun& run);

/// CSV "t,avg_<name>,...", t from 1, 17 significant digits.
void export_running_averages(const SimResult& result, std::ostream& out);

}  // namespace regret
