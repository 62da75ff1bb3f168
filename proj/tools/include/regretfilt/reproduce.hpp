#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "regret/analysis.hpp"
#include "regret/baselines.hpp"
#include "regret/synthesis.hpp"

namespace regretfilt {

/// The four estimators compared throughout.
struct FilterSet {
  regret::SynthesisResult synthesis;
  regret::HinfResult hinf;
};

FilterSet build_filters(const regret::StateSpaceModel& model, double tol = 1e-6);

/// Column name ("h2", "hinf", "regret_opt", "noncausal") to frequency response.
/// Accepts "regret" as an alias for "regret_opt". Throws InvalidArgument.
regret::Response filter_response(const regret::StateSpaceModel& model, const FilterSet& set,
                                 const std::string& name, std::string* column = nullptr);

struct TableCell {
  double value = 0.0;
  double reference = 0.0;
  bool pass = false;
};

struct TableRow {
  std::string label;
  std::array<TableCell, 3> cells;  // Frobenius^2, operator^2, regret
};

struct TableReport {
  int id = 1;
  std::optional<double> delta_t;  // tracking table only
  double tolerance = 0.02;
  std::vector<TableRow> rows;     // noncausal, regret-optimal, H2, Hinf
  bool anchor_pass = true;        // noncausal Frobenius cell
  bool all_pass = true;
};

/// Table 1: scalar plant, tolerance 0.02. Table 2: tracking plant, 0.03.
/// Throws InvalidArgument for any other id.
TableReport reproduce_table(int id, double delta_t = 1.0);

std::string format_table(const TableReport& report);
std::string table_csv(const TableReport& report);

}  // namespace regretfilt
