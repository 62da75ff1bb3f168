#pragma once

// Frequency-domain performance of an estimator K through its error operator
// T_K(z) = [L(z) - K(z)H(z), -K(z)]:
//   squared Frobenius norm  (1/2pi) int trace(T_K* T_K) dw
//   squared operator norm   max_w sigma_max(T_K* T_K)
//   regret                  max_w |lambda|_max(T_K* T_K - T_K0* T_K0)

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "regret/linalg.hpp"
#include "regret/state_space.hpp"

namespace regret {

/// Uniform midpoint grid w_k = 2pi (k + 1/2) / N, N a power of two >= 64.
/// Midpoints never land on z = 1 or z = -1, where plants with integrators or
/// alternating modes have poles.
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::size_t count = 2048);

  std::size_t count() const { return count_; }
  double spacing() const;
  double omega(std::size_t k) const;
  std::vector<double> omegas() const;
  FrequencyGrid refined() const { return FrequencyGrid(2 * count_); }

 private:
  std::size_t count_;
};

/// Frequency response of an estimator, K(e^{jw}) as a p x m matrix.
using Response = std::function<CMatrix(double omega)>;

Response response_of(const LtiFilter& filt);
Response noncausal_estimator(const StateSpaceModel& model);

struct NormOptions {
  double relative_tolerance = 1e-6;      // quadrature grid-doubling test
  std::size_t max_points = std::size_t{1} << 20;
  double omega_tolerance = 1e-10;        // golden-section refinement
};

/// Squared Frobenius norm, midpoint quadrature with pairwise summation, the
/// grid doubled until the estimate moves by less than relative_tolerance.
/// Throws NonConvergedQuadrature past max_points.
double frobenius_norm_sq(const StateSpaceModel& model, const Response& K,
                         const FrequencyGrid& grid = FrequencyGrid(),
                         const NormOptions& options = {});

struct Peak {
  double value = 0.0;
  double argmax_omega = 0.0;
  std::vector<double> curve;  // pointwise value on the grid
};

/// sigma_max(T_K(e^{jw}))^2; grid max refined by golden section.
Peak operator_norm_sq(const StateSpaceModel& model, const Response& K,
                      const FrequencyGrid& grid = FrequencyGrid(),
                      const NormOptions& options = {});

/// Largest absolute eigenvalue of T_K* T_K - T_K0* T_K0 (the difference is
/// Hermitian and generally indefinite); grid max refined by golden section.
Peak regret_norm(const StateSpaceModel& model, const Response& K,
                 const FrequencyGrid& grid = FrequencyGrid(),
                 const NormOptions& options = {});

/// Pointwise quantities at one frequency.
double operator_sample(const StateSpaceModel& model, const CMatrix& K, double omega);
double regret_sample(const StateSpaceModel& model, const CMatrix& K, double omega);

struct NormReport {
  std::string name;
  double frobenius_sq = 0.0;
  double operator_sq = 0.0;
  double regret = 0.0;
  double argmax_omega = 0.0;          // of the operator-norm curve
  std::vector<double> curve;          // ||T_K(e^{jw})||^2 on the grid
  std::vector<double> regret_curve;   // pointwise regret on the grid
};

NormReport analyze(const StateSpaceModel& model, const Response& K, std::string name,
                   const FrequencyGrid& grid = FrequencyGrid(),
                   const NormOptions& options = {});

enum class CurveKind { Operator, Regret };

/// CSV: header "omega,<name>,...", one row per grid frequency, 17 significant
/// digits, LF line endings. All reports must share the grid.
void export_curves(const std::vector<NormReport>& reports, const FrequencyGrid& grid,
                   CurveKind kind, std::ostream& out);

/// Same, to a file path ("-" for stdout). Throws IoError.
void export_curves(const std::vector<NormReport>& reports, const FrequencyGrid& grid,
                   CurveKind kind, const std::string& path);

struct CurveTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CurveTable parse_curves(std::istream& in);

/// Formats a double with 17 significant digits.
std::string format_number(double value);

/// Sum with pairwise (cascade) reduction; result independent of thread count
/// for a fixed input order.
double pairwise_sum(const double* data, std::size_t count);

struct TapEnergy {
  double causal = 0.0;        // sum over k >= 0 of |x_k r^{-k}|^2
  double anticausal = 0.0;    // sum over k < 0
  double total() const { return causal + anticausal; }
};

/// Splits X(z) = sum_k x_k z^{-k} into causal and anticausal tap energy
/// from N samples on the circle |z| = radius (midpoint angles), using an
/// inverse FFT. `radius` must lie in the annulus where the expansion
/// converges. Taps k in [0, N/2) count as causal, [-N/2, 0) as anticausal.
TapEnergy tap_energy(const std::function<CMatrix(Complex)>& X, std::size_t count,
                     double radius = 1.0);

}  // namespace regret
