#pragma once

#include <string>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::engine {

/// Keeps the signals that `roots` (and every assumption) depend on, through
/// wires and register next functions. Declaration order is preserved, so the
/// reduced system prints and encodes deterministically.
ir::TransitionSystem cone_of_influence(const ir::TransitionSystem& ts,
                                       const std::vector<std::string>& roots);

}  // namespace formalign::engine
