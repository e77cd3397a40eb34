#pragma once

#include <unordered_map>
#include <vector>

#include "formalign/ir/bitblast.hpp"
#include "formalign/sat/cnf.hpp"

namespace formalign::sat {

/// Tseitin encoding of a gate graph into `cnf`, on demand: lit() encodes only
/// the cone of the requested node. Each And/Or/Xor gate gets one fresh
/// variable; Not gates reuse their operand's variable with the sign flipped.
/// Variable numbering depends only on the order of requests.
class TseitinEncoder {
 public:
  TseitinEncoder(const ir::GateGraph& graph, Cnf& cnf) : graph_(graph), cnf_(cnf) {}

  /// Maps an Input gate to an existing CNF literal (the environment).
  void bind(ir::Node input, int lit) { lits_[input] = lit; }

  /// CNF literal equivalent to `n`. Unbound inputs get fresh variables.
  int lit(ir::Node n);

  bool encoded(ir::Node n) const { return lits_.count(n) != 0; }

  /// Asserts `n` (adds a unit clause).
  void require(ir::Node n) { cnf_.add({lit(n)}); }

 private:
  int true_lit();

  const ir::GateGraph& graph_;
  Cnf& cnf_;
  std::unordered_map<ir::Node, int> lits_;
  int true_ = 0;
};

}  // namespace formalign::sat
