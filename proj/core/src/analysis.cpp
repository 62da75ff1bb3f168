#include "regret/analysis.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "regret/error.hpp"
#include "regret/synthesis.hpp"

namespace regret {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Distance between two angles on the circle.
double angular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double golden_max(const std::function<double(double)>& f, double a, double b, double tol,
                  double& best_x) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc > fd) {
    best_x = c;
    return fc;
  }
  best_x = d;
  return fd;
}

// Grid maximum of `f`, refined by golden section on the neighbouring cells.
// Refinement intervals stay at least h/2 from unit-circle plant poles; the
// endpoints 0 and pi are added when they are not poles.
Peak refine_peak(const std::function<double(double)>& f, const FrequencyGrid& grid,
                 const std::vector<double>& poles, double omega_tol) {
  const std::size_t N = grid.count();
  const double h = grid.spacing();
  Peak peak;
  peak.curve.resize(N);
  std::size_t best = 0;
  for (std::size_t k = 0; k < N; ++k) {
    peak.curve[k] = f(grid.omega(k));
    if (peak.curve[k] > peak.curve[best]) best = k;
  }
  peak.value = peak.curve[best];
  peak.argmax_omega = grid.omega(best);

  const double center = grid.omega(best);
  double a = center - h;
  double b = center + h;
  for (double pole : poles) {
    // Poles of interest lie within one cell of the centre; shift them next to it.
    double rel = std::remainder(pole - center, kTwoPi);
    if (std::abs(rel) <= h + h / 2) {
      if (rel < 0) a = std::max(a, center + rel + h / 2);
      else b = std::min(b, center + rel - h / 2);
    }
  }
  if (b > a) {
    double x = center;
    const double v = golden_max(f, a, b, omega_tol, x);
    if (v > peak.value) {
      peak.value = v;
      peak.argmax_omega = std::fmod(x + kTwoPi, kTwoPi);
    }
  }
  for (double edge : {0.0, std::numbers::pi}) {
    const bool legal = std::none_of(poles.begin(), poles.end(), [&](double p) {
      return angular_distance(p, edge) < h / 2;
    });
    if (!legal) continue;
    const double v = f(edge);
    if (v > peak.value) {
      peak.value = v;
      peak.argmax_omega = edge;
    }
  }
  return peak;
}

double trace_sample(const StateSpaceModel& model, const CMatrix& K, double omega) {
  return error_operator_sample(model, K, omega).squaredNorm();
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::size_t count) : count_(count) {
  if (count < 64 || !is_power_of_two(count)) {
    throw Error(ErrorCode::InvalidArgument,
                "FrequencyGrid: count must be a power of two >= 64");
  }
}

double FrequencyGrid::spacing() const { return kTwoPi / static_cast<double>(count_); }

double FrequencyGrid::omega(std::size_t k) const {
  return spacing() * (static_cast<double>(k) + 0.5);
}

std::vector<double> FrequencyGrid::omegas() const {
  std::vector<double> out(count_);
  for (std::size_t k = 0; k < count_; ++k) out[k] = omega(k);
  return out;
}

Response response_of(const LtiFilter& filt) {
  return [filt](double omega) { return eval_transfer(filt, omega); };
}

Response noncausal_estimator(const StateSpaceModel& model) {
  return [model](double omega) { return noncausal_response(model, omega); };
}

double pairwise_sum(const double* data, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += data[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, count - half);
}

double frobenius_norm_sq(const StateSpaceModel& model, const Response& K,
                         const FrequencyGrid& grid, const NormOptions& options) {
  auto estimate = [&](const FrequencyGrid& g) {
    std::vector<double> v(g.count());
    for (std::size_t k = 0; k < g.count(); ++k) {
      const double w = g.omega(k);
      v[k] = trace_sample(model, K(w), w);
    }
    return pairwise_sum(v.data(), v.size()) / static_cast<double>(g.count());
  };
  FrequencyGrid g = grid;
  double previous = estimate(g);
  while (true) {
    if (2 * g.count() > options.max_points) {
      throw Error(ErrorCode::NonConvergedQuadrature,
                  "frobenius_norm_sq: quadrature did not converge within max_points");
    }
    g = g.refined();
    const double current = estimate(g);
    const double scale = std::max(std::abs(current), 1e-300);
    if (std::abs(current - previous) <= options.relative_tolerance * scale) return current;
    previous = current;
  }
}

double operator_sample(const StateSpaceModel& model, const CMatrix& K, double omega) {
  const double s = max_singular_value(error_operator_sample(model, K, omega));
  return s * s;
}

double regret_sample(const StateSpaceModel& model, const CMatrix& K, double omega) {
  const CMatrix T = error_operator_sample(model, K, omega);
  const CMatrix T0 = error_operator_sample(model, noncausal_response(model, omega), omega);
  const CMatrix D = T.adjoint() * T - T0.adjoint() * T0;
  return hermitian_norm(0.5 * (D + D.adjoint()));
}

Peak operator_norm_sq(const StateSpaceModel& model, const Response& K,
                      const FrequencyGrid& grid, const NormOptions& options) {
  return refine_peak([&](double w) { return operator_sample(model, K(w), w); }, grid,
                     unit_circle_poles(model), options.omega_tolerance);
}

Peak regret_norm(const StateSpaceModel& model, const Response& K, const FrequencyGrid& grid,
                 const NormOptions& options) {
  return refine_peak([&](double w) { return regret_sample(model, K(w), w); }, grid,
                     unit_circle_poles(model), options.omega_tolerance);
}

NormReport analyze(const StateSpaceModel& model, const Response& K, std::string name,
                   const FrequencyGrid& grid, const NormOptions& options) {
  NormReport r;
  r.name = std::move(name);
  r.frobenius_sq = frobenius_norm_sq(model, K, grid, options);
  Peak op = operator_norm_sq(model, K, grid, options);
  r.operator_sq = op.value;
  r.argmax_omega = op.argmax_omega;
  r.curve = std::move(op.curve);
  Peak rg = regret_norm(model, K, grid, options);
  r.regret = rg.value;
  r.regret_curve = std::move(rg.curve);
  return r;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void export_curves(const std::vector<NormReport>& reports, const FrequencyGrid& grid,
                   CurveKind kind, std::ostream& out) {
  for (const auto& r : reports) {
    const auto& c = kind == CurveKind::Operator ? r.curve : r.regret_curve;
    if (c.size() != grid.count()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "export_curves: report '" + r.name + "' does not match the grid");
    }
  }
  out << "omega";
  for (const auto& r : reports) out << ',' << r.name;
  out << '\n';
  if (reports.empty()) return;
  for (std::size_t k = 0; k < grid.count(); ++k) {
    out << format_number(grid.omega(k));
    for (const auto& r : reports) {
      const auto& c = kind == CurveKind::Operator ? r.curve : r.regret_curve;
      out << ',' << format_number(c[k]);
    }
    out << '\n';
  }
}

void export_curves(const std::vector<NormReport>& reports, const FrequencyGrid& grid,
                   CurveKind kind, const std::string& path) {
  if (path == "-") {
    export_curves(reports, grid, kind, std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  export_curves(reports, grid, kind, file);
  file.close();
  if (!file) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

CurveTable parse_curves(std::istream& in) {
  CurveTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "parse_curves: empty input");
  table.header = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::ParseError,
                  "parse_curves: wrong column count on line " + std::to_string(lineno));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() || *end != '\0') {
        throw Error(ErrorCode::ParseError,
                    "parse_curves: bad number '" + c + "' on line " + std::to_string(lineno));
      }
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

TapEnergy tap_energy(const std::function<CMatrix(Complex)>& X, std::size_t count,
                     double radius) {
  if (count < 2 || !is_power_of_two(count) || !(radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "tap_energy: count must be a power of two and radius positive");
  }
  const double h = kTwoPi / static_cast<double>(count);
  std::vector<CMatrix> samples(count);
  for (std::size_t k = 0; k < count; ++k) {
    samples[k] = X(std::polar(radius, h * (static_cast<double>(k) + 0.5)));
  }
  const Eigen::Index rows = samples[0].rows();
  const Eigen::Index cols = samples[0].cols();

  Eigen::FFT<double> fft;
  std::vector<Complex> in(count);
  std::vector<Complex> taps;
  std::vector<double> causal(count / 2 * rows * cols);
  std::vector<double> anti(count / 2 * rows * cols);
  std::size_t ci = 0;
  std::size_t ai = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < count; ++k) in[k] = samples[k](i, j);
      fft.inv(taps, in);
      // Midpoint sampling rotates tap k by exp(-j pi k / N); the rotation has
      // unit modulus, so energies need no correction.
      for (std::size_t k = 0; k < count / 2; ++k) causal[ci++] = std::norm(taps[k]);
      for (std::size_t k = count / 2; k < count; ++k) anti[ai++] = std::norm(taps[k]);
    }
  }
  return {pairwise_sum(causal.data(), causal.size()), pairwise_sum(anti.data(), anti.size())};
}

}  // namespace regret
