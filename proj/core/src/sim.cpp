#include "regret/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "regret/analysis.hpp"
#include "regret/error.hpp"

namespace regret {

std::uint64_t CounterRng::mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t k) const {
  return mix64(seed_ + (k + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform(std::uint64_t k) const {
  return static_cast<double>((bits(k) >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t j) const {
  const double u1 = uniform(2 * j);
  const double u2 = uniform(2 * j + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

DisturbanceTrace gaussian_disturbance(const StateSpaceModel& model, std::size_t horizon,
                                      std::uint64_t seed, double scale) {
  const auto q = model.disturbances();
  const auto m = model.observations();
  const auto T = static_cast<Eigen::Index>(horizon);
  const CounterRng rng(seed);
  DisturbanceTrace trace{Matrix(q, T), Matrix(m, T)};
  std::uint64_t j = 0;
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index i = 0; i < q; ++i) trace.w(i, t) = scale * rng.normal(j++);
    for (Eigen::Index i = 0; i < m; ++i) trace.v(i, t) = scale * rng.normal(j++);
  }
  return trace;
}

DisturbanceTrace worst_case_disturbance(const StateSpaceModel& model, const LtiFilter& filt,
                                        std::size_t horizon) {
  const auto q = model.disturbances();
  const auto m = model.observations();
  const auto T = static_cast<Eigen::Index>(horizon);
  const double omega = operator_norm_sq(model, response_of(filt)).argmax_omega;
  const CMatrix Tk = error_operator_sample(model, filt, omega);

  const bool real_point = std::abs(std::sin(omega)) < 1e-12;
  CVector dir;
  if (real_point) {
    Eigen::JacobiSVD<Matrix> svd(Tk.real(), Eigen::ComputeFullV);
    dir = svd.matrixV().col(0).cast<Complex>();
  } else {
    Eigen::JacobiSVD<CMatrix> svd(Tk, Eigen::ComputeFullV);
    dir = svd.matrixV().col(0);
  }

  Matrix d(q + m, T);
  for (Eigen::Index t = 0; t < T; ++t) {
    d.col(t) = (dir * std::polar(1.0, omega * static_cast<double>(t))).real();
  }
  const double energy = d.squaredNorm();
  if (energy > 0.0) d *= std::sqrt(static_cast<double>(T) / energy);
  return {d.topRows(q), d.bottomRows(m)};
}

FilterRun run_filter(const StateSpaceModel& model, const NamedFilter& filt,
                     const DisturbanceTrace& trace) {
  const LtiFilter& f = filt.filter;
  f.validate();
  if (f.inputs() != model.observations() || f.outputs() != model.signals() ||
      trace.w.rows() != model.disturbances() || trace.v.rows() != model.observations() ||
      trace.w.cols() != trace.v.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "simulate: filter, model and trace disagree");
  }
  const auto T = trace.w.cols();
  FilterRun run;
  run.name = filt.name;
  run.errors.resize(model.signals(), T);
  run.running_avg.resize(static_cast<std::size_t>(T));
  run.input_energy = trace.energy();

  Vector x = Vector::Zero(model.states());
  Vector xi = Vector::Zero(f.order());
  double acc = 0.0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const Vector y = model.H * x + trace.v.col(t);
    const Vector e = model.L * x - (f.C * xi + f.D * y);
    run.errors.col(t) = e;
    acc += e.squaredNorm();
    run.running_avg[static_cast<std::size_t>(t)] = acc / static_cast<double>(t + 1);
    xi = f.A * xi + f.B * y;
    x = model.F * x + model.G * trace.w.col(t);
  }
  return run;
}

std::size_t burn_in_steps(const std::vector<NamedFilter>& filters) {
  double rho = 0.0;
  for (const auto& f : filters) {
    if (f.filter.order() > 0) rho = std::max(rho, spectral_radius(f.filter.A));
  }
  if (rho >= 1.0) throw Error(ErrorCode::UnstableOperator, "simulate: unstable filter");
  return static_cast<std::size_t>(std::ceil(10.0 / (1.0 - rho)));
}

SimResult simulate(const StateSpaceModel& model, const std::vector<NamedFilter>& filters,
                   const DisturbanceSpec& spec, const DisturbanceTrace* custom) {
  model.validate();
  if (spec.horizon < 1) throw Error(ErrorCode::InvalidArgument, "simulate: horizon must be >= 1");
  SimResult result;
  result.burn_in = burn_in_steps(filters);

  switch (spec.kind) {
    case DisturbanceKind::Gaussian: {
      const DisturbanceTrace trace =
          gaussian_disturbance(model, spec.horizon, spec.seed, spec.scale);
      for (const auto& f : filters) result.runs.push_back(run_filter(model, f, trace));
      break;
    }
    case DisturbanceKind::Adversarial:
      for (const auto& f : filters) {
        DisturbanceTrace trace = worst_case_disturbance(model, f.filter, spec.horizon);
        trace.w *= spec.scale;
        trace.v *= spec.scale;
        result.runs.push_back(run_filter(model, f, trace));
      }
      break;
    case DisturbanceKind::Custom:
      if (custom == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "simulate: custom kind needs a trace");
      }
      for (const auto& f : filters) result.runs.push_back(run_filter(model, f, *custom));
      break;
  }
  return result;
}

double plateau_average(const FilterRun& run, std::size_t burn_in) {
  const auto T = static_cast<std::size_t>(run.errors.cols());
  if (burn_in >= T) return 0.0;
  std::vector<double> v(T - burn_in);
  for (std::size_t t = burn_in; t < T; ++t) {
    v[t - burn_in] = run.errors.col(static_cast<Eigen::Index>(t)).squaredNorm();
  }
  return pairwise_sum(v.data(), v.size()) / static_cast<double>(v.size());
}

double energy_gain(const FilterRun& run) {
  return run.input_energy > 0.0 ? run.errors.squaredNorm() / run.input_energy : 0.0;
}

void export_running_averages(const SimResult& result, std::ostream& out) {
  out << 't';
  for (const auto& r : result.runs) out << ",avg_" << r.name;
  out << '\n';
  if (result.runs.empty()) return;
  const std::size_t T = result.runs.front().running_avg.size();
  for (std::size_t t = 0; t < T; ++t) {
    out << (t + 1);
    for (const auto& r : result.runs) out << ',' << format_number(r.running_avg[t]);
    out << '\n';
  }
}

}  // namespace regret
