#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "formalign/ir/transition_system.hpp"
#include "formalign/specgen/regmap.hpp"

namespace formalign::specgen {

/// One expected connection. Signals are `name` or `name[hi:lo]`; the
/// condition is property-language text and may be empty.
struct ConnRow {
  std::string src_block, src_signal;
  std::string dst_block, dst_signal;
  std::string condition;
  unsigned latency = 0;
  int row = 0;
};

struct ConnTable {
  std::vector<ConnRow> rows;
};

/// Header `src_block,src_signal,dst_block,dst_signal,condition,latency`. An
/// empty latency cell means 0.
ConnTable parse_conn_csv(std::string_view text);
std::string print_conn_csv(const ConnTable& t);

/// Property text, one check `conn_<n>` per row (n counts from 1). A row whose
/// ends differ in width yields a `# FINDING conn_<n>` line instead. Throws
/// SpecError when a signal or condition does not resolve in `ts`.
std::string gen_conn_props(const ConnTable& t, const ir::TransitionSystem& ts);

/// Block of a flat signal name: the text before its first underscore.
std::string block_of(const std::string& signal);

/// Walks each wire and output back through copies, slices, concatenations,
/// mux arms and zero-initialized registers (at most `max_latency` of them).
/// Every source reached gives a row whose condition is the conjunction of the
/// mux selects on the way, shifted by the register latency at which they act.
ConnTable extract_connectivity(const ir::TransitionSystem& ts, unsigned max_latency = 2);

}  // namespace formalign::specgen
