#include "formalign/props/evaluator.hpp"

#include <algorithm>

namespace formalign::props {

const char* verdict_name(EvalResult::Verdict v) {
  switch (v) {
    case EvalResult::Verdict::Pass: return "PASS";
    case EvalResult::Verdict::Fail: return "FAIL";
    case EvalResult::Verdict::Pending: return "PENDING";
  }
  return "?";
}

namespace {

struct Ctx {
  const ir::Trace& tr;
  const std::vector<Flag>& flags;
};

std::uint64_t value_at(const BExprPtr& e, const Ctx& c, std::size_t t);

std::uint64_t signal(const std::string& name, const Ctx& c, std::size_t t) {
  const ir::Cycle& cy = c.tr.cycles.at(t);
  for (const ir::Valuation* m : {&cy.inputs, &cy.registers, &cy.wires, &cy.outputs}) {
    auto it = m->find(name);
    if (it != m->end()) return it->second;
  }
  for (const auto& f : c.flags) {
    if (f.name != name) continue;
    for (std::size_t u = 0; u < t; ++u)
      if (value_at(f.expr, c, u) != 0) return 1;
    return 0;
  }
  throw EvalError("trace has no signal '" + name + "'");
}

std::uint64_t value_at(const BExprPtr& e, const Ctx& c, std::size_t t) {
  switch (e->kind) {
    case BExpr::Kind::Const:
      return e->value;
    case BExpr::Kind::Ref: {
      const std::uint64_t v = signal(e->name, c, t);
      if (!e->range) return v;
      return (v >> e->range->second) & ir::width_mask(e->range->first - e->range->second + 1);
    }
    case BExpr::Kind::Past:
      return t >= e->depth ? value_at(e->args[0], c, t - e->depth) : 0;
    case BExpr::Kind::Stable:
      return value_at(e->args[0], c, t) == (t >= 1 ? value_at(e->args[0], c, t - 1) : 0) ? 1 : 0;
    case BExpr::Kind::Not:
      return value_at(e->args[0], c, t) == 0 ? 1 : 0;
    case BExpr::Kind::And:
      return value_at(e->args[0], c, t) != 0 && value_at(e->args[1], c, t) != 0 ? 1 : 0;
    case BExpr::Kind::Or:
      return value_at(e->args[0], c, t) != 0 || value_at(e->args[1], c, t) != 0 ? 1 : 0;
    case BExpr::Kind::Eq:
      return value_at(e->args[0], c, t) == value_at(e->args[1], c, t) ? 1 : 0;
    case BExpr::Kind::Neq:
      return value_at(e->args[0], c, t) != value_at(e->args[1], c, t) ? 1 : 0;
  }
  return 0;
}

}  // namespace

std::uint64_t eval_at(const BExprPtr& e, const ir::Trace& tr, std::size_t cycle,
                      const std::vector<Flag>& flags) {
  return value_at(e, Ctx{tr, flags}, cycle);
}

EvalResult eval_property_on_trace(const Property& p, const ir::Trace& tr,
                                  const std::vector<Flag>& flags) {
  const Ctx c{tr, flags};
  const std::size_t n = tr.cycles.size();
  EvalResult r;
  if (p.kind == Property::Kind::Invariant) {
    for (std::size_t t = 0; t < n; ++t) {
      if (value_at(p.invariant, c, t) == 0) {
        r.verdict = EvalResult::Verdict::Fail;
        r.fail_cycle = t;
        return r;
      }
    }
    return r;
  }

  const auto ant = p.antecedent.offsets();
  const auto con = p.consequent.offsets();
  const std::size_t len = p.antecedent.length();
  const std::size_t start = p.consequent_start();
  bool failed = false, pending = false;
  std::size_t first_fail = 0;
  for (std::size_t t = 0; t + len < n; ++t) {
    bool match = true;
    for (std::size_t i = 0; i < ant.size() && match; ++i)
      match = value_at(p.antecedent.items[i].expr, c, t + ant[i]) != 0;
    if (!match) continue;
    ++r.matches;
    for (std::size_t j = 0; j < con.size(); ++j) {
      const std::size_t at = t + start + con[j];
      if (at >= n) {
        pending = true;
        break;
      }
      if (value_at(p.consequent.items[j].expr, c, at) == 0) {
        if (!failed || at < first_fail) first_fail = at;
        failed = true;
        break;
      }
    }
  }
  r.vacuous = r.matches == 0;
  if (failed) {
    r.verdict = EvalResult::Verdict::Fail;
    r.fail_cycle = first_fail;
  } else if (pending) {
    r.verdict = EvalResult::Verdict::Pending;
  }
  return r;
}

}  // namespace formalign::props
