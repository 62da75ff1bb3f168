#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "regret/analysis.hpp"
#include "regret/error.hpp"
#include "regret/sim.hpp"
#include "regretfilt/io.hpp"
#include "regretfilt/reproduce.hpp"

using regret::Error;
using regret::ErrorCode;
using namespace regretfilt;

namespace {

constexpr int kUsageExit = 2;
constexpr int kSynthesisExit = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::IoError:
      return kUsageExit;
    default:
      return kSynthesisExit;
  }
}

int report_error(const std::string& code, const std::string& message, int exit_code) {
  std::cerr << error_report(code, message, exit_code).dump() << '\n';
  return exit_code;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Common {
  std::string model;
  std::optional<double> delta_t;
  std::string out = "-";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--model", c.model, "builtin:scalar, builtin:tracking, or a model JSON file")
      ->required();
  cmd->add_option("--delta-t", c.delta_t, "sampling interval for tracking models")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "output path, - for stdout");
}

int cmd_synth(const Common& c, double tol) {
  const auto model = load_model(c.model, c.delta_t);
  const auto result = regret::synthesize(model, {.tol = tol});
  write_text(c.out, synthesis_report(model, result).dump(2) + "\n");
  return 0;
}

int cmd_analyze(const Common& c, const std::string& filters, std::size_t grid_count,
                const std::string& curve, const std::string& summary) {
  const auto model = load_model(c.model, c.delta_t);
  const regret::FrequencyGrid grid(grid_count);
  const auto names = split_list(filters);
  if (names.empty()) throw Error(ErrorCode::InvalidArgument, "--filters is empty");
  const FilterSet set = build_filters(model);
  std::vector<regret::NormReport> reports;
  for (const auto& n : names) {
    std::string column;
    const auto K = filter_response(model, set, n, &column);
    reports.push_back(regret::analyze(model, K, column, grid));
  }
  const auto kind = curve == "regret" ? regret::CurveKind::Regret : regret::CurveKind::Operator;
  std::ostringstream csv;
  regret::export_curves(reports, grid, kind, csv);
  write_text(c.out, csv.str());
  json doc = norm_summary(reports);
  doc["gamma_star"] = set.synthesis.gamma_star;
  doc["hinf_level_star"] = set.hinf.level_star;
  if (!summary.empty()) write_text(summary, doc.dump(2) + "\n");
  else if (c.out != "-") std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const Common& c, const std::string& kind, std::size_t horizon,
                 std::uint64_t seed, double scale) {
  const auto model = load_model(c.model, c.delta_t);
  const FilterSet set = build_filters(model);
  const std::vector<regret::NamedFilter> filters = {
      {"h2", set.synthesis.kalman}, {"hinf", set.hinf.filter}, {"regret_opt", set.synthesis.filter}};
  regret::DisturbanceSpec spec;
  spec.kind = kind == "adversarial" ? regret::DisturbanceKind::Adversarial
                                    : regret::DisturbanceKind::Gaussian;
  spec.horizon = horizon;
  spec.seed = seed;
  spec.scale = scale;
  std::ostringstream csv;
  regret::export_running_averages(regret::simulate(model, filters, spec), csv);
  write_text(c.out, csv.str());
  return 0;
}

int cmd_reproduce(int table, const std::string& out, std::optional<double> delta_t) {
  const TableReport report = reproduce_table(table, delta_t.value_or(1.0));
  std::cout << format_table(report);
  if (!out.empty()) write_text(out, table_csv(report));
  return report.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret-optimal filter synthesis and analysis"};
  app.require_subcommand(1);

  Common synth_c;
  double tol = 1e-6;
  auto* synth = app.add_subcommand("synth", "synthesize the regret-optimal filter (JSON)");
  add_common(synth, synth_c);
  synth->add_option("--tol", tol, "bisection tolerance")->check(CLI::PositiveNumber);

  Common analyze_c;
  std::string filters = "h2,hinf,regret,noncausal";
  std::size_t grid = 2048;
  std::string curve = "operator";
  std::string summary;
  auto* analyze = app.add_subcommand("analyze", "frequency-domain norms and curves (CSV)");
  add_common(analyze, analyze_c);
  analyze->add_option("--filters", filters, "comma list of h2, hinf, regret, noncausal");
  analyze->add_option("--grid", grid, "frequency grid size (power of two >= 64)");
  analyze->add_option("--curve", curve, "curve to export")
      ->check(CLI::IsMember({"operator", "regret"}));
  analyze->add_option("--summary", summary, "JSON summary path");

  Common sim_c;
  std::string kind = "gaussian";
  std::size_t horizon = 100000;
  std::uint64_t seed = 1;
  double scale = 1.0;
  auto* simulate = app.add_subcommand("simulate", "time-averaged error energy (CSV)");
  add_common(simulate, sim_c);
  simulate->add_option("--kind", kind, "disturbance kind")
      ->check(CLI::IsMember({"gaussian", "adversarial"}));
  simulate->add_option("--horizon", horizon, "number of steps")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000000}));
  simulate->add_option("--seed", seed, "generator seed");
  simulate->add_option("--scale", scale, "disturbance scale")->check(CLI::PositiveNumber);

  int table = 1;
  std::string table_out;
  std::optional<double> table_dt;
  auto* reproduce = app.add_subcommand("reproduce", "reproduce a published performance table");
  reproduce->add_option("--table", table, "1 (scalar) or 2 (tracking)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  reproduce->add_option("--out", table_out, "CSV path, - for stdout");
  reproduce->add_option("--delta-t", table_dt, "tracking sampling interval")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what(), kUsageExit);
  }

  try {
    if (synth->parsed()) return cmd_synth(synth_c, tol);
    if (analyze->parsed()) return cmd_analyze(analyze_c, filters, grid, curve, summary);
    if (simulate->parsed()) return cmd_simulate(sim_c, kind, horizon, seed, scale);
    if (reproduce->parsed()) return cmd_reproduce(table, table_out, table_dt);
  } catch (const Error& e) {
    return report_error(std::string(regret::to_string(e.code())), e.what(),
                        exit_code_for(e.code()));
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what(), kSynthesisExit);
  }
  return kUsageExit;
}
