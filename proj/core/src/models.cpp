#include "regret/models.hpp"

#include <cmath>

#include "regret/error.hpp"

namespace regret {

StateSpaceModel scalar_model() {
  StateSpaceModel m;
  m.F = Matrix::Constant(1, 1, 0.9);
  m.G = Matrix::Ones(1, 1);
  m.H = Matrix::Ones(1, 1);
  m.L = Matrix::Ones(1, 1);
  m.name = "builtin:scalar";
  return m;
}

namespace {

StateSpaceModel tracking_plant(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorCode::InvalidArgument, "tracking model: delta_t must be positive");
  }
  StateSpaceModel m;
  m.F.resize(2, 2);
  m.F << 1.0, dt, 0.0, 1.0;
  m.G.resize(2, 1);
  m.G << 0.0, dt;
  m.H.resize(1, 2);
  m.H << 1.0, 0.0;
  return m;
}

}  // namespace

StateSpaceModel tracking_model(double delta_t) {
  StateSpaceModel m = tracking_plant(delta_t);
  m.L = m.H;
  m.name = "builtin:tracking";
  return m;
}

StateSpaceModel tracking_ahead_model(double delta_t) {
  StateSpaceModel m = tracking_plant(delta_t);
  m.L.resize(1, 2);
  m.L << 1.0, delta_t;
  m.name = "builtin:tracking-ahead";
  return m;
}

StateSpaceModel builtin_model(std::string_view name, double delta_t) {
  if (name == "builtin:scalar") return scalar_model();
  if (name == "builtin:tracking") return tracking_model(delta_t);
  if (name == "builtin:tracking-ahead") return tracking_ahead_model(delta_t);
  throw Error(ErrorCode::InvalidArgument, "unknown builtin model '" + std::string(name) + "'");
}

std::vector<std::string> builtin_model_names() {
  return {"builtin:scalar", "builtin:tracking", "builtin:tracking-ahead"};
}

}  // namespace regret
