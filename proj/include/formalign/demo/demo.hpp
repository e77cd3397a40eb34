#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::demo {

enum class Bug { None, B1, B2, B3, B4 };

std::string_view bug_name(Bug b);
std::optional<Bug> parse_bug(std::string_view s);

/// The app expected to flag a seeded bug.
enum class App { Fpv, Csr, Conn };

std::string_view app_name(App a);

struct BugSpec {
  Bug id;
  std::string mutation;
  App detected_by;
  std::string expected;  // verdict or finding
  std::string step;      // flow step that reports it
  std::string target;    // property or finding name
};

/// B1..B4 in order.
const std::vector<BugSpec>& bug_specs();

/// SPI frame: rw (1 = write), address and data, MSB first, one bit per rising
/// sck edge; sck toggles every system cycle.
struct DemoConfig {
  Bug bug = Bug::None;
  unsigned tds_width = 2;  // time-delay code width: delays 1 .. 2^w
  unsigned addr_bits = 4;
  unsigned data_bits = 8;
  unsigned daisy_length = 2;

  unsigned frame_width() const { return 1 + addr_bits + data_bits; }
};

/// The design and every input file of the flow, as text.
struct DemoBundle {
  ir::TransitionSystem ts;
  std::string ir;     // demo.ir
  std::string props;  // demo.props, hand-written properties
  std::string regs;   // demo_regs.csv
  std::string bind;   // demo.bind
  std::string conn;   // demo_conn.csv
  std::string spec;   // demo_spec.xml
};

/// SPI slave with daisy-chain stages, register bank and analog stub, with at
/// most one seeded bug. Throws std::invalid_argument on configurations other
/// than the 2-bit delay code, 4-bit address, 8-bit data layout.
DemoBundle build_demo(const DemoConfig& cfg);

/// File names of the bundle in emit order, paired with their contents.
std::vector<std::pair<std::string, std::string>> bundle_files(const DemoBundle& b);

}  // namespace formalign::demo
