#include "formalign/sat/tseitin.hpp"

namespace formalign::sat {

using ir::GateKind;
using ir::Node;

int TseitinEncoder::true_lit() {
  if (!true_) {
    true_ = cnf_.new_var("true");
    cnf_.add({true_});
  }
  return true_;
}

int TseitinEncoder::lit(Node root) {
  if (auto it = lits_.find(root); it != lits_.end()) return it->second;
  // Iterative post-order: ripple-carry chains across many frames run deep.
  std::vector<std::pair<Node, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [n, expanded] = stack.back();
    stack.pop_back();
    if (lits_.count(n)) continue;
    const ir::Gate& g = graph_.gate(n);
    if (!expanded) {
      switch (g.kind) {
        case GateKind::Not:
          stack.push_back({n, true});
          stack.push_back({g.a, false});
          continue;
        case GateKind::And:
        case GateKind::Or:
        case GateKind::Xor:
          stack.push_back({n, true});
          stack.push_back({g.b, false});
          stack.push_back({g.a, false});
          continue;
        default:
          break;
      }
    }
    int out = 0;
    switch (g.kind) {
      case GateKind::False: out = -true_lit(); break;
      case GateKind::True: out = true_lit(); break;
      case GateKind::Input: out = cnf_.new_var(); break;
      case GateKind::Not: out = -lits_.at(g.a); break;
      case GateKind::And: {
        const int a = lits_.at(g.a), b = lits_.at(g.b);
        out = cnf_.new_var();
        cnf_.add({-out, a});
        cnf_.add({-out, b});
        cnf_.add({out, -a, -b});
        break;
      }
      case GateKind::Or: {
        const int a = lits_.at(g.a), b = lits_.at(g.b);
        out = cnf_.new_var();
        cnf_.add({out, -a});
        cnf_.add({out, -b});
        cnf_.add({-out, a, b});
        break;
      }
      case GateKind::Xor: {
        const int a = lits_.at(g.a), b = lits_.at(g.b);
        out = cnf_.new_var();
        cnf_.add({-out, a, b});
        cnf_.add({-out, -a, -b});
        cnf_.add({out, -a, b});
        cnf_.add({out, a, -b});
        break;
      }
    }
    lits_[n] = out;
  }
  return lits_.at(root);
}

}  // namespace formalign::sat
