#pragma once

#include <stdexcept>
#include <string>

#include "formalign/ir/transition_system.hpp"
#include "formalign/props/ast.hpp"

namespace formalign::props {

class MonitorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kMaxPastDepth = 64;

/// A system extended with the synchronous checker of one property.
struct CompiledMonitor {
  ir::TransitionSystem ts;
  std::string ok;     // 1-bit wire: no obligation has failed so far
  std::string fail;   // 1-bit wire, sticky: NOT ok
  std::string fail_reg;
  std::string match;  // 1-bit wire: antecedent completes this cycle; empty for invariants
};

/// Prefix of every signal a monitor for `prop` adds.
std::string monitor_prefix(const std::string& prop);

/// Adds the flags (as sticky registers named after the flag) and assumptions
/// of `f` to a copy of `ts`.
ir::TransitionSystem bind_props(const ir::TransitionSystem& ts, const PropFile& f);

/// Compiles `p` against `ts`. The result only adds signals; nothing existing
/// is rewired. Throws MonitorError on unknown signals, bad bit ranges, name
/// clashes or $past deeper than kMaxPastDepth.
CompiledMonitor compile_monitor(const ir::TransitionSystem& ts, const Property& p);

/// 1-bit expression for `e` over `ts`, adding history registers named
/// `<prefix>_past*` as needed.
ir::Expr compile_condition(ir::TransitionSystem& ts, const BExprPtr& e, const std::string& prefix);

}  // namespace formalign::props
