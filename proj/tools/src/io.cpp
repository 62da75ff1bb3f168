#include "regretfilt/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "regret/models.hpp"

namespace regretfilt {

using regret::Error;
using regret::ErrorCode;
using regret::Matrix;

namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

}  // namespace

json matrix_to_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) parse_error(what + ": expected a non-empty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array()) parse_error(what + ": row " + std::to_string(i) + " is not an array");
    if (i == 0) cols = j[i].size();
    else if (j[i].size() != cols) parse_error(what + ": ragged rows");
  }
  if (cols == 0) parse_error(what + ": empty rows");
  Matrix M(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      const json& v = j[i][k];
      if (!v.is_number()) parse_error(what + ": non-numeric entry");
      const double x = v.get<double>();
      if (!std::isfinite(x)) parse_error(what + ": non-finite entry");
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = x;
    }
  }
  return M;
}

regret::StateSpaceModel parse_model(const json& doc, std::optional<double> delta_t) {
  if (!doc.is_object()) parse_error("model: expected a JSON object");
  if (doc.contains("template")) {
    if (!doc["template"].is_string()) parse_error("model: template must be a string");
    double dt = 1.0;
    if (doc.contains("delta_t")) {
      if (!doc["delta_t"].is_number()) parse_error("model: delta_t must be a number");
      dt = doc["delta_t"].get<double>();
    }
    if (delta_t) dt = *delta_t;
    try {
      return regret::builtin_model("builtin:" + doc["template"].get<std::string>(), dt);
    } catch (const Error& e) {
      parse_error(std::string("model: ") + e.what());
    }
  }
  regret::StateSpaceModel m;
  for (const char* key : {"F", "G", "H", "L"}) {
    if (!doc.contains(key)) parse_error(std::string("model: missing key \"") + key + "\"");
  }
  m.F = matrix_from_json(doc["F"], "F");
  m.G = matrix_from_json(doc["G"], "G");
  m.H = matrix_from_json(doc["H"], "H");
  m.L = matrix_from_json(doc["L"], "L");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) parse_error("model: name must be a string");
    m.name = doc["name"].get<std::string>();
  }
  try {
    m.validate();
  } catch (const Error& e) {
    parse_error(std::string("model: ") + e.what());
  }
  return m;
}

regret::StateSpaceModel load_model(const std::string& spec, std::optional<double> delta_t) {
  if (spec.rfind("builtin:", 0) == 0) {
    try {
      return regret::builtin_model(spec, delta_t.value_or(1.0));
    } catch (const Error& e) {
      parse_error(e.what());
    }
  }
  json doc;
  try {
    doc = json::parse(read_file(spec));
  } catch (const json::exception& e) {
    parse_error(spec + ": " + e.what());
  }
  regret::StateSpaceModel m = parse_model(doc, delta_t);
  if (m.name.empty()) m.name = spec;
  return m;
}

json model_to_json(const regret::StateSpaceModel& model) {
  return {{"name", model.name},
          {"F", matrix_to_json(model.F)},
          {"G", matrix_to_json(model.G)},
          {"H", matrix_to_json(model.H)},
          {"L", matrix_to_json(model.L)}};
}

json filter_to_json(const regret::LtiFilter& f) {
  return {{"order", f.order()},
          {"A", matrix_to_json(f.A)},
          {"B", matrix_to_json(f.B)},
          {"C", matrix_to_json(f.C)},
          {"D", matrix_to_json(f.D)}};
}

regret::LtiFilter filter_from_json(const json& j) {
  if (!j.is_object()) parse_error("filter: expected a JSON object");
  for (const char* key : {"A", "B", "C", "D"}) {
    if (!j.contains(key)) parse_error(std::string("filter: missing key \"") + key + "\"");
  }
  regret::LtiFilter f{matrix_from_json(j["A"], "A"), matrix_from_json(j["B"], "B"),
                      matrix_from_json(j["C"], "C"), matrix_from_json(j["D"], "D")};
  try {
    f.validate();
  } catch (const Error& e) {
    parse_error(std::string("filter: ") + e.what());
  }
  return f;
}

json synthesis_report(const regret::StateSpaceModel& model, const regret::SynthesisResult& r) {
  json out;
  out["model"] = model_to_json(model);
  out["gamma_star"] = r.gamma_star;
  out["gamma_star_sq"] = r.gamma_star * r.gamma_star;
  out["degenerate"] = r.degenerate;
  out["P"] = matrix_to_json(r.p.X);
  out["K_P"] = matrix_to_json(r.p.gain);
  out["F_P"] = matrix_to_json(r.p.closed_loop);
  if (r.workspace) {
    const auto& ws = *r.workspace;
    out["sigma"] = ws.sigma;
    out["W"] = matrix_to_json(ws.w.X);
    out["K_W"] = matrix_to_json(ws.w.gain);
    out["R_W"] = matrix_to_json(ws.w.innovation);
    out["F_W"] = matrix_to_json(ws.w.closed_loop);
    out["Q"] = matrix_to_json(ws.q.X);
    out["K_Q"] = matrix_to_json(ws.q.gain);
    out["R_Q"] = matrix_to_json(ws.q.innovation);
    out["F_Q"] = matrix_to_json(ws.q.closed_loop);
    out["U"] = matrix_to_json(ws.U);
    out["Pi"] = matrix_to_json(ws.Pi);
    out["Z"] = matrix_to_json(ws.Z);
  }
  if (r.nehari) {
    out["nehari"] = {{"G_N", matrix_to_json(r.nehari->G_N)},
                     {"F_N", matrix_to_json(r.nehari->F_N)},
                     {"Pi_tilde", matrix_to_json(r.nehari->Pi_tilde)}};
  }
  out["filter"] = filter_to_json(r.filter);
  out["kalman"] = filter_to_json(r.kalman);
  json rec = json::array();
  for (const auto& p : r.record) {
    rec.push_back({{"gamma", p.gamma}, {"sigma", p.sigma}, {"solved", p.solved}, {"pass", p.pass}});
  }
  out["bisection"] = std::move(rec);
  return out;
}

json norm_summary(const std::vector<regret::NormReport>& reports) {
  json out = json::object();
  for (const auto& r : reports) {
    out[r.name] = {{"frobenius_sq", r.frobenius_sq},
                   {"operator_sq", r.operator_sq},
                   {"regret", r.regret},
                   {"argmax_omega", r.argmax_omega}};
  }
  return out;
}

json error_report(const std::string& code, const std::string& message, int exit_code) {
  return {{"error", {{"code", code}, {"message", message}, {"exit_code", exit_code}}}};
}

json error_report(ErrorCode code, const std::string& message, int exit_code) {
  return error_report(std::string(regret::to_string(code)), message, exit_code);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace regretfilt
