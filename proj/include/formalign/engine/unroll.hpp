#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "formalign/ir/bitblast.hpp"
#include "formalign/ir/interp.hpp"

namespace formalign::engine {

/// Time-frame expansion of a transition system into one gate graph. Frame
/// i+1's register bits are the next-state functions of frame i; frame 0 is
/// either the init constants (I_0) or free inputs.
class UnrollContext {
 public:
  UnrollContext(const ir::TransitionSystem& ts, bool pin_init);

  const ir::TransitionSystem& system() const { return ts_; }
  ir::GateGraph& graph() { return graph_; }
  const ir::GateGraph& graph() const { return graph_; }
  bool pinned() const { return pin_init_; }
  unsigned frames() const { return static_cast<unsigned>(frames_.size()); }

  /// Makes frames 0..count-1 available.
  void ensure(unsigned count);

  const ir::Bits& signal(unsigned frame, const std::string& name);
  ir::Node bit(unsigned frame, const std::string& name) { return signal(frame, name).at(0); }

  /// Conjunction of the system's assumptions at `frame` (kTrue if none).
  ir::Node assumptions(unsigned frame);

  /// 1 iff the register bits of frames i and j differ.
  ir::Node states_differ(unsigned i, unsigned j);

  /// Input gates of one frame, per input port (LSB first).
  const std::vector<ir::Bits>& input_bits(unsigned frame) const { return frames_.at(frame).inputs; }
  const std::vector<ir::Bits>& state_bits(unsigned frame) const { return frames_.at(frame).state; }

  /// Decodes a trace of `count` cycles from input-gate values and replays it
  /// under the interpreter. Throws std::logic_error when the replay disagrees
  /// with the gate-level values (an encoding bug). The trace is pseudo when
  /// frame 0 is not pinned.
  ir::Trace extract_trace(const std::function<bool(ir::Node)>& input_value, unsigned count);

 private:
  struct Frame {
    std::unordered_map<std::string, ir::Bits> bits;
    std::vector<ir::Bits> inputs;
    std::vector<ir::Bits> state;
    std::vector<ir::Node> assumptions;
    ir::Node assume_all = ir::GateGraph::kTrue;
  };

  void add_frame();

  ir::TransitionSystem ts_;
  bool pin_init_;
  ir::GateGraph graph_;
  std::vector<Frame> frames_;
  std::vector<ir::Bits> pending_next_;
};

}  // namespace formalign::engine
