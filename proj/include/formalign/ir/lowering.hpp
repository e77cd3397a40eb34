#pragma once

#include <string>

#include "formalign/ir/transition_system.hpp"

namespace formalign::ir {

/// Adds an n-stage register chain (init 0) behind `signal` and a wire
/// `<signal>_dly<n>` carrying the delayed value. Existing signals are untouched.
TransitionSystem delay_to_flops(const TransitionSystem& ts, const std::string& signal, unsigned n);

/// Name of the wire created by delay_to_flops.
std::string delayed_name(const std::string& signal, unsigned n);

/// Turns every analog port into a plain input. A declared range becomes the
/// assumption `<port>_in_range`: min <= port <= max.
TransitionSystem lower_analog_ports(const TransitionSystem& ts);

}  // namespace formalign::ir
