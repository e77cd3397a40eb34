#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::ir {

enum class GateKind : std::uint8_t { False, True, Input, Not, And, Or, Xor };

struct Gate {
  GateKind kind;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

using Node = std::uint32_t;
using Bits = std::vector<Node>;  // least significant bit first

/// Structurally hashed boolean gate graph with constant folding. Gates are
/// created after their operands, so index order is a topological order.
class GateGraph {
 public:
  static constexpr Node kFalse = 0;
  static constexpr Node kTrue = 1;

  GateGraph();

  Node input(std::string name = {});
  Node lnot(Node a);
  Node land(Node a, Node b);
  Node lor(Node a, Node b);
  Node lxor(Node a, Node b);
  Node lxnor(Node a, Node b) { return lnot(lxor(a, b)); }
  Node lmux(Node c, Node t, Node e);
  Node constant(bool v) const { return v ? kTrue : kFalse; }

  const Gate& gate(Node n) const { return gates_[n]; }
  std::size_t size() const { return gates_.size(); }
  const std::string& input_name(Node n) const;
  bool is_const(Node n) const { return n <= kTrue; }

  /// Evaluates every gate; `inputs` gives the value of each Input gate.
  std::vector<std::uint8_t> evaluate(const std::function<bool(Node)>& inputs) const;

 private:
  Node intern(GateKind k, Node a, Node b);

  std::vector<Gate> gates_;
  std::unordered_map<std::uint64_t, Node> table_;
  std::unordered_map<Node, std::string> names_;
};

// Word-level operators over bit vectors.
Bits blast_const(unsigned width, std::uint64_t value);
Bits blast_add(GateGraph& g, const Bits& a, const Bits& b, Node carry_in = GateGraph::kFalse);
Bits blast_sub(GateGraph& g, const Bits& a, const Bits& b);
Node blast_ult(GateGraph& g, const Bits& a, const Bits& b);
Node blast_eq(GateGraph& g, const Bits& a, const Bits& b);

/// Blasts expressions against a leaf environment, memoizing shared nodes.
class ExprBlaster {
 public:
  using Leaf = std::function<const Bits&(const std::string&)>;

  ExprBlaster(GateGraph& g, Leaf leaf) : g_(g), leaf_(std::move(leaf)) {}
  const Bits& blast(const Expr& e);

 private:
  GateGraph& g_;
  Leaf leaf_;
  std::unordered_map<const ExprNode*, Bits> memo_;
};

/// Per-bit netlist of one transition-system step. Inputs, analog ports and
/// current register values are Input gates; every named signal and every
/// register's next function is available bitwise.
struct BitNetlist {
  GateGraph graph;
  std::map<std::string, Bits> signals;  // leaves, wires and outputs
  std::map<std::string, Bits> next;     // per register
  std::map<std::string, Node> assumptions;
};

BitNetlist bitblast(const TransitionSystem& ts);

/// Blasts one time frame of `ts` into `g`. `bits` must hold leaf bits for
/// every input, analog port and register; wires and outputs are added to it.
/// Returns the next-state bits per register, in declaration order.
std::vector<Bits> blast_frame(GateGraph& g, const TransitionSystem& ts,
                              std::unordered_map<std::string, Bits>& bits,
                              std::vector<Node>* assumptions = nullptr);

/// Packs bit values back into a word.
std::uint64_t word_value(const Bits& bits, const std::vector<std::uint8_t>& values);

}  // namespace formalign::ir
