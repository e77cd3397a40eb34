#pragma once

// Random small properties and the monitor-side verdict used in differential tests.

#include <optional>
#include <random>

#include "formalign/ir/interp.hpp"
#include "formalign/props/ast.hpp"
#include "formalign/props/monitor.hpp"

namespace oracles {

namespace props = formalign::props;

struct PropGen {
  std::mt19937_64& rng;
  std::vector<std::pair<std::string, unsigned>> signals;

  unsigned pick(unsigned n) { return static_cast<unsigned>(rng() % n); }

  props::BExprPtr word() {
    const auto& [name, w] = signals[pick(static_cast<unsigned>(signals.size()))];
    if (w > 1 && pick(3) == 0) {
      const unsigned hi = pick(w);
      return props::make_ref(name, std::make_pair(hi, pick(hi + 1)));
    }
    return props::make_ref(name);
  }

  props::BExprPtr expr(int depth) {
    if (depth <= 0) {
      switch (pick(6)) {
        case 0: return props::make_const(pick(3));
        case 1: return props::make_past(word(), 1 + pick(3));
        default: return word();
      }
    }
    switch (pick(9)) {
      case 0: return props::make_not(expr(depth - 1));
      case 1: return props::make_and(expr(depth - 1), expr(depth - 1));
      case 2: return props::make_or(expr(depth - 1), expr(depth - 1));
      case 3: return props::make_eq(expr(depth - 1), expr(depth - 1));
      case 4: return props::make_neq(word(), props::make_const(pick(4)));
      case 5: return props::make_past(expr(depth - 1), 1 + pick(3));
      case 6: return props::make_stable(word());
      default: return expr(0);
    }
  }

  props::Sequence sequence(bool leading_delay) {
    props::Sequence s;
    const unsigned n = 1 + pick(3);
    for (unsigned i = 0; i < n; ++i)
      s.items.push_back({(i > 0 || leading_delay) ? pick(3) : 0u, expr(static_cast<int>(pick(3)))});
    return s;
  }

  props::Property property(const std::string& name) {
    props::Property p;
    p.name = name;
    switch (pick(3)) {
      case 0:
        p.kind = props::Property::Kind::Invariant;
        p.invariant = expr(2);
        break;
      case 1:
        p.kind = props::Property::Kind::Overlapped;
        p.antecedent = sequence(false);
        p.consequent = sequence(true);
        break;
      default:
        p.kind = props::Property::Kind::NonOverlapped;
        p.antecedent = sequence(false);
        p.consequent = sequence(true);
        break;
    }
    return p;
  }
};

// First cycle at which the compiled monitor's ok bit is 0 when the monitored
// system runs the inputs of `tr`.
inline std::optional<std::size_t> monitor_fail_cycle(const props::CompiledMonitor& m,
                                                     const formalign::ir::Trace& tr) {
  std::vector<formalign::ir::Valuation> stim;
  for (const auto& c : tr.cycles) stim.push_back(c.inputs);
  auto run = formalign::ir::simulate(m.ts, stim);
  for (std::size_t t = 0; t < run.cycles.size(); ++t)
    if (run.cycles[t].wires.at(m.ok) == 0) return t;
  return std::nullopt;
}

}  // namespace oracles
