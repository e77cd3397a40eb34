#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "formalign/ir/interp.hpp"

namespace formalign::demo {

class VcdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Timescale 1ns, one timestep per cycle, values dumped on change. Signals are
/// grouped into inputs, registers, wires and outputs scopes under the design
/// name; widths come from `ts`.
void write_vcd(const ir::Trace& tr, const ir::TransitionSystem& ts, std::ostream& out);
void write_vcd_file(const ir::Trace& tr, const ir::TransitionSystem& ts, const std::string& path);

/// Reads what write_vcd produces back into a trace.
ir::Trace read_vcd(std::istream& in);

}  // namespace formalign::demo
