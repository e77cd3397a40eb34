#include "formalign/props/monitor.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace formalign::props {

namespace ir = formalign::ir;

std::string monitor_prefix(const std::string& prop) { return "mon_" + prop; }

namespace {

// Either a word-valued expression or a still-unsized integer constant.
struct Val {
  ir::Expr e;
  std::uint64_t k = 0;
  bool is_const() const { return !e; }
};

unsigned bits_for(std::uint64_t k) { return k == 0 ? 1u : static_cast<unsigned>(std::bit_width(k)); }

class Compiler {
 public:
  Compiler(ir::TransitionSystem& ts, std::string prefix) : ts_(ts), prefix_(std::move(prefix)) {}

  ir::Expr boolean(const BExprPtr& e) { return to_bool(word(e)); }

  // Delays `x` by n cycles through 0-initialized registers, sharing chains.
  ir::Expr delay(const ir::Expr& x, unsigned n, const std::string& tag) {
    if (n == 0) return x;
    auto& chain = chains_[{tag, ir::to_sexpr(x)}];
    if (chain.empty()) chain.push_back(x);
    while (chain.size() <= n) {
      const std::string name = fresh(tag);
      ts_.add_register(name, x->width(), 0, chain.back());
      chain.push_back(ir::var(name, x->width()));
    }
    return chain[n];
  }

  std::string fresh(const std::string& tag) {
    for (;;) {
      std::string name = prefix_ + "_" + tag + std::to_string(counter_[tag]++);
      if (!ts_.has(name)) return name;
    }
  }

 private:
  ir::Expr sized(const Val& v, unsigned w) {
    if (v.is_const()) return ir::constant(w, v.k);
    return ir::zext(v.e, w);
  }
  ir::Expr to_bool(const Val& v) {
    if (v.is_const()) return ir::constant(1, v.k != 0 ? 1 : 0);
    return ir::redor(v.e);
  }

  Val word(const BExprPtr& e) {
    switch (e->kind) {
      case BExpr::Kind::Const:
        return {nullptr, e->value};
      case BExpr::Kind::Ref: {
        auto info = ts_.find(e->name);
        if (!info || info->kind == ir::SignalKind::Assumption)
          throw MonitorError("unknown signal '" + e->name + "'");
        ir::Expr v = ir::var(e->name, info->width);
        if (e->range) {
          if (e->range->first >= info->width)
            throw MonitorError("bit range [" + std::to_string(e->range->first) + ":" +
                               std::to_string(e->range->second) + "] outside '" + e->name + "' (" +
                               std::to_string(info->width) + " bits)");
          v = ir::slice(v, e->range->first, e->range->second);
        }
        return {v};
      }
      case BExpr::Kind::Past: {
        if (e->depth > kMaxPastDepth)
          throw MonitorError("$past depth " + std::to_string(e->depth) + " exceeds " +
                             std::to_string(kMaxPastDepth));
        Val inner = word(e->args[0]);
        ir::Expr x = inner.is_const() ? ir::constant(bits_for(inner.k), inner.k) : inner.e;
        return {delay(x, e->depth, "past")};
      }
      case BExpr::Kind::Stable: {
        Val inner = word(e->args[0]);
        ir::Expr x = inner.is_const() ? ir::constant(bits_for(inner.k), inner.k) : inner.e;
        return {ir::eq(x, delay(x, 1, "past"))};
      }
      case BExpr::Kind::Not:
        return {ir::bnot(to_bool(word(e->args[0])))};
      case BExpr::Kind::And:
        return {ir::band(to_bool(word(e->args[0])), to_bool(word(e->args[1])))};
      case BExpr::Kind::Or:
        return {ir::bor(to_bool(word(e->args[0])), to_bool(word(e->args[1])))};
      case BExpr::Kind::Eq:
      case BExpr::Kind::Neq: {
        Val a = word(e->args[0]), b = word(e->args[1]);
        ir::Expr r;
        if (a.is_const() && b.is_const()) {
          r = ir::constant(1, a.k == b.k ? 1 : 0);
        } else {
          unsigned w = 1;
          for (const Val* v : {&a, &b}) w = std::max(w, v->is_const() ? bits_for(v->k) : v->e->width());
          r = ir::eq(sized(a, w), sized(b, w));
        }
        return {e->kind == BExpr::Kind::Eq ? r : ir::bnot(r)};
      }
    }
    throw MonitorError("unhandled expression");
  }

  ir::TransitionSystem& ts_;
  std::string prefix_;
  std::map<std::pair<std::string, std::string>, std::vector<ir::Expr>> chains_;
  std::map<std::string, unsigned> counter_;
};

void claim(const ir::TransitionSystem& ts, const std::string& name) {
  if (ts.has(name)) throw MonitorError("name '" + name + "' already exists in the design");
}

}  // namespace

ir::Expr compile_condition(ir::TransitionSystem& ts, const BExprPtr& e, const std::string& prefix) {
  Compiler c(ts, prefix);
  return c.boolean(e);
}

ir::TransitionSystem bind_props(const ir::TransitionSystem& ts, const PropFile& f) {
  ir::TransitionSystem out = ts;
  try {
    // Flags first so that assumptions and properties may read them.
    for (const auto& fl : f.flags) {
      claim(out, fl.name);
      out.add_register(fl.name, 1, 0);
    }
    for (const auto& fl : f.flags) {
      Compiler c(out, "flag_" + fl.name);
      ir::Expr cond = c.boolean(fl.expr);
      out.set_next(fl.name, ir::bor(ir::var(fl.name, 1), cond));
    }
    for (const auto& a : f.assumes) {
      claim(out, a.name);
      Compiler c(out, "asm_" + a.name);
      out.add_assumption(a.name, c.boolean(a.expr));
    }
  } catch (const ir::IrError& e) {
    throw MonitorError(e.what());
  }
  return out;
}

CompiledMonitor compile_monitor(const ir::TransitionSystem& ts, const Property& p) {
  CompiledMonitor m;
  m.ts = ts;
  const std::string pre = monitor_prefix(p.name);
  m.ok = pre + "_ok";
  m.fail = pre + "_fail";
  m.fail_reg = pre + "_fail_q";
  for (const auto& n : {m.ok, m.fail, m.fail_reg}) claim(ts, n);
  try {
    Compiler c(m.ts, pre);
    ir::Expr bad_now;
    if (p.kind == Property::Kind::Invariant) {
      bad_now = ir::bnot(c.boolean(p.invariant));
    } else {
      // Stage i holds when items 0..i matched at their relative offsets.
      const auto& ant = p.antecedent.items;
      ir::Expr stage = c.boolean(ant[0].expr);
      for (std::size_t i = 1; i < ant.size(); ++i)
        stage = ir::band(c.delay(stage, ant[i].delay, "ant"), c.boolean(ant[i].expr));
      m.match = pre + "_match";
      claim(m.ts, m.match);
      m.ts.add_wire(m.match, stage);
      ir::Expr matched = ir::var(m.match, 1);

      // Obligation j is due `shift` cycles after the antecedent completes.
      const auto offs = p.consequent.offsets();
      const unsigned start = p.kind == Property::Kind::NonOverlapped ? 1 : 0;
      for (std::size_t j = 0; j < offs.size(); ++j) {
        ir::Expr due = c.delay(matched, start + offs[j], "due");
        ir::Expr bad = ir::band(due, ir::bnot(c.boolean(p.consequent.items[j].expr)));
        bad_now = bad_now ? ir::bor(bad_now, bad) : bad;
      }
    }
    ir::Expr fail_q = ir::var(m.fail_reg, 1);
    m.ts.add_register(m.fail_reg, 1, 0, ir::bor(fail_q, bad_now));
    m.ts.add_wire(m.fail, ir::bor(fail_q, bad_now));
    m.ts.add_wire(m.ok, ir::bnot(ir::var(m.fail, 1)));
  } catch (const ir::IrError& e) {
    throw MonitorError(std::string("property '") + p.name + "': " + e.what());
  } catch (const MonitorError& e) {
    throw MonitorError(std::string("property '") + p.name + "': " + e.what());
  }
  return m;
}

}  // namespace formalign::props
