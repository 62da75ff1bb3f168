#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "regret/state_space.hpp"

namespace regret {

/// F = 0.9, G = H = L = 1.
StateSpaceModel scalar_model();

/// Position/velocity plant driven by acceleration, noisy position observed:
///   F = [1 dt; 0 1], G = [0; dt], H = [1 0], estimated signal L = [1 0].
StateSpaceModel tracking_model(double delta_t = 1.0);

/// Same plant with the one-step-ahead position as the signal, L = [1 dt].
StateSpaceModel tracking_ahead_model(double delta_t = 1.0);

/// "builtin:scalar", "builtin:tracking", "builtin:tracking-ahead".
/// Throws InvalidArgument for any other name.
StateSpaceModel builtin_model(std::string_view name, double delta_t = 1.0);

std::vector<std::string> builtin_model_names();

}  // namespace regret
