#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "regret/analysis.hpp"
#include "regret/error.hpp"
#include "regret/synthesis.hpp"

namespace regretfilt {

using json = nlohmann::json;

/// Row-major nested arrays, one inner array per row.
json matrix_to_json(const regret::Matrix& M);
/// Throws ParseError on ragged, empty or non-finite input.
regret::Matrix matrix_from_json(const json& j, const std::string& what);

/// Model document: "F", "G", "H", "L" plus optional "name", or a template
/// {"template": "scalar" | "tracking" | "tracking-ahead", "delta_t": dt}.
regret::StateSpaceModel parse_model(const json& doc, std::optional<double> delta_t = {});

/// `spec` is a builtin name (builtin:...) or a path to a model document.
regret::StateSpaceModel load_model(const std::string& spec, std::optional<double> delta_t = {});

json model_to_json(const regret::StateSpaceModel& model);

json filter_to_json(const regret::LtiFilter& filt);
regret::LtiFilter filter_from_json(const json& j);

json synthesis_report(const regret::StateSpaceModel& model, const regret::SynthesisResult& r);

json norm_summary(const std::vector<regret::NormReport>& reports);

json error_report(regret::ErrorCode code, const std::string& message, int exit_code);
json error_report(const std::string& code, const std::string& message, int exit_code);

/// Reads a whole file; throws IoError.
std::string read_file(const std::string& path);
/// Writes `text` to `path` ("-" for stdout); throws IoError.
void write_text(const std::string& path, const std::string& text);

}  // namespace regretfilt
