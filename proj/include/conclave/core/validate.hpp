#pragma once

#include <string>
#include <vector>

#include "conclave/core/types.hpp"

namespace conclave::core {

/// Checks every roster invariant and returns the full list of violations
/// (empty means the roster is valid). Never stops at the first problem.
std::vector<std::string> validate_roster(const AgentRoster& roster);

}  // namespace conclave::core
