#include "regretfilt/reproduce.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "regret/error.hpp"
#include "regret/models.hpp"

namespace regretfilt {

using regret::Response;

FilterSet build_filters(const regret::StateSpaceModel& model, double tol) {
  return {regret::synthesize(model, {.tol = tol}), regret::hinf_optimal(model, tol)};
}

Response filter_response(const regret::StateSpaceModel& model, const FilterSet& set,
                         const std::string& name, std::string* column) {
  auto col = [&](const char* c) {
    if (column) *column = c;
  };
  if (name == "h2") {
    col("h2");
    return regret::response_of(set.synthesis.kalman);
  }
  if (name == "hinf") {
    col("hinf");
    return regret::response_of(set.hinf.filter);
  }
  if (name == "regret" || name == "regret_opt") {
    col("regret_opt");
    return regret::response_of(set.synthesis.filter);
  }
  if (name == "noncausal") {
    col("noncausal");
    return regret::noncausal_estimator(model);
  }
  throw regret::Error(regret::ErrorCode::InvalidArgument, "unknown filter '" + name + "'");
}

namespace {

struct Reference {
  const char* label;
  const char* filter;
  std::array<double, 3> values;
};

constexpr std::array<Reference, 4> kScalarTable{{
    {"Noncausal", "noncausal", {0.46, 0.99, 0.0}},
    {"Regret-optimal", "regret_opt", {0.65, 1.1, 0.38}},
    {"H2", "h2", {0.6, 1.27, 0.7}},
    {"Hinf", "hinf", {0.94, 0.99, 0.71}},
}};

constexpr std::array<Reference, 4> kTrackingTable{{
    {"Noncausal", "noncausal", {0.39, 1.0, 0.0}},
    {"Regret-optimal", "regret_opt", {0.82, 1.24, 0.65}},
    {"H2", "h2", {0.77, 1.4, 1.02}},
    {"Hinf", "hinf", {0.97, 1.0, 0.95}},
}};

}  // namespace

TableReport reproduce_table(int id, double delta_t) {
  if (id != 1 && id != 2) {
    throw regret::Error(regret::ErrorCode::InvalidArgument, "table must be 1 or 2");
  }
  TableReport report;
  report.id = id;
  report.tolerance = id == 1 ? 0.02 : 0.03;
  if (id == 2) report.delta_t = delta_t;
  const regret::StateSpaceModel model =
      id == 1 ? regret::scalar_model() : regret::tracking_model(delta_t);
  const auto& refs = id == 1 ? kScalarTable : kTrackingTable;
  const FilterSet set = build_filters(model);

  for (const auto& ref : refs) {
    const regret::NormReport n =
        regret::analyze(model, filter_response(model, set, ref.filter), ref.filter);
    TableRow row;
    row.label = ref.label;
    const double values[3] = {n.frobenius_sq, n.operator_sq, n.regret};
    for (int c = 0; c < 3; ++c) {
      row.cells[c].value = values[c];
      row.cells[c].reference = ref.values[c];
      row.cells[c].pass = std::abs(values[c] - ref.values[c]) <= report.tolerance;
      report.all_pass = report.all_pass && row.cells[c].pass;
    }
    report.rows.push_back(row);
  }
  report.anchor_pass = report.rows.front().cells[0].pass;
  return report;
}

std::string format_table(const TableReport& r) {
  std::ostringstream out;
  char buf[160];
  out << "Table " << r.id << (r.id == 1 ? " (scalar plant)" : " (tracking plant)");
  if (r.delta_t) {
    std::snprintf(buf, sizeof buf, ", delta_t = %g", *r.delta_t);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, ", tolerance +/-%.2f\n", r.tolerance);
  out << buf;
  std::snprintf(buf, sizeof buf, "%-16s %-18s %-18s %-18s\n", "", "||T||_F^2", "||T||^2",
                "Regret");
  out << buf;
  for (const auto& row : r.rows) {
    std::snprintf(buf, sizeof buf, "%-16s", row.label.c_str());
    out << buf;
    for (const auto& c : row.cells) {
      std::snprintf(buf, sizeof buf, " %.2f (%.2f) %-4s ", c.value, c.reference,
                    c.pass ? "PASS" : "FAIL");
      out << buf;
    }
    out << '\n';
  }
  if (!r.anchor_pass && r.delta_t) {
    out << "anchor cell (noncausal ||T||_F^2) mismatched at delta_t = " << *r.delta_t
        << "; run a delta_t calibration sweep with --delta-t\n";
  }
  out << (r.all_pass ? "all cells PASS\n" : "some cells FAIL\n");
  return out.str();
}

std::string table_csv(const TableReport& r) {
  std::ostringstream out;
  out << "estimator,frobenius_sq,frobenius_ref,operator_sq,operator_ref,regret,regret_ref,pass\n";
  for (const auto& row : r.rows) {
    out << row.label;
    bool pass = true;
    for (const auto& c : row.cells) {
      out << ',' << regret::format_number(c.value) << ',' << regret::format_number(c.reference);
      pass = pass && c.pass;
    }
    out << ',' << (pass ? "PASS" : "FAIL") << '\n';
  }
  return out.str();
}

}  // namespace regretfilt
