#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::ir {

/// Signal name to value. Ordered so that printing and comparison are stable.
using Valuation = std::map<std::string, std::uint64_t>;
using State = Valuation;

struct StepResult {
  State next;
  Valuation wires;
  Valuation outputs;
  Valuation assumptions;
};

/// One clock cycle of a trace. `inputs` covers inputs and analog ports.
struct Cycle {
  Valuation inputs;
  Valuation registers;
  Valuation wires;
  Valuation outputs;

  bool operator==(const Cycle&) const = default;
};

struct Trace {
  std::vector<Cycle> cycles;
  // Set for induction-step witnesses: the first state may be unreachable.
  bool pseudo = false;

  std::size_t size() const { return cycles.size(); }
  bool operator==(const Trace&) const = default;
};

/// Value of any recorded signal of a cycle.
std::optional<std::uint64_t> lookup(const Cycle& c, const std::string& name);

/// Reference interpreter. Expressions are flattened once into a slot program;
/// evaluation is then a linear pass. Instances are immutable after
/// construction and may be shared; every call uses caller-owned buffers.
class Interpreter {
 public:
  explicit Interpreter(const TransitionSystem& ts);

  const TransitionSystem& system() const { return ts_; }

  /// Slot buffer with constants preloaded and leaves zeroed.
  std::vector<std::uint64_t> make_frame() const { return initial_; }

  std::size_t slot(const std::string& name) const;
  std::optional<std::size_t> find_slot(const std::string& name) const;
  std::size_t next_slot(std::size_t reg_index) const { return next_slots_[reg_index]; }
  std::size_t assumption_slot(std::size_t i) const { return assume_slots_[i]; }

  /// Computes wires, outputs, assumptions and next values in `frame`. Leaves
  /// (inputs, analog ports, registers) must already be set.
  void eval(std::vector<std::uint64_t>& frame) const;

  /// Copies the next values of `frame` into its register slots.
  void advance(std::vector<std::uint64_t>& frame) const;

  State initial_state() const;
  StepResult step(const State& s, const Valuation& in) const;

  /// Full valuation of one cycle.
  Cycle observe(const State& s, const Valuation& in) const;

  bool assumptions_hold(const std::vector<std::uint64_t>& frame) const;

 private:
  struct Instr {
    Op op;
    unsigned width;
    unsigned aux;  // slice lo, concat low width, redand operand width
    std::uint32_t dst, a, b, c;
  };

  std::uint32_t compile(const Expr& e, std::unordered_map<const ExprNode*, std::uint32_t>& memo);
  void load(std::vector<std::uint64_t>& frame, const State& s, const Valuation& in) const;

  TransitionSystem ts_;
  std::unordered_map<std::string, std::uint32_t> slots_;
  std::vector<std::uint64_t> initial_;
  std::vector<Instr> program_;
  std::vector<std::uint32_t> next_slots_;
  std::vector<std::uint32_t> assume_slots_;
};

/// Word-level single step, per the semantics of the interpreter above.
StepResult eval_step(const TransitionSystem& ts, const State& s, const Valuation& in);

/// Runs `inputs` from the init state and records every cycle.
Trace simulate(const TransitionSystem& ts, const std::vector<Valuation>& inputs);

/// Same, from an arbitrary start state. The result is marked pseudo.
Trace simulate_from(const TransitionSystem& ts, const State& start,
                    const std::vector<Valuation>& inputs);

/// Checks that `tr` replays bit-for-bit: cycle 0 holds the init state (unless
/// pseudo), registers follow the next map and every recorded wire/output
/// value matches. Returns a description of the first divergence.
std::optional<std::string> validate_trace(const TransitionSystem& ts, const Trace& tr);

}  // namespace formalign::ir
