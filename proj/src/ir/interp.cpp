#include "formalign/ir/interp.hpp"

#include <sstream>

namespace formalign::ir {

Interpreter::Interpreter(const TransitionSystem& ts) : ts_(ts) {
  auto leaf = [&](const std::string& name) {
    slots_[name] = static_cast<std::uint32_t>(initial_.size());
    initial_.push_back(0);
  };
  for (const auto& p : ts_.inputs) leaf(p.name);
  for (const auto& a : ts_.analogs) leaf(a.name);
  for (const auto& r : ts_.registers) leaf(r.name);

  std::unordered_map<const ExprNode*, std::uint32_t> memo;
  for (const Definition* d : ts_.combinational_order()) slots_[d->name] = compile(d->expr, memo);
  for (const auto& a : ts_.assumptions) assume_slots_.push_back(compile(a.expr, memo));
  for (const auto& r : ts_.registers) {
    if (!r.next) throw IrError(DiagCode::MissingNext, "register '" + r.name + "' has no next");
    next_slots_.push_back(compile(r.next, memo));
  }
}

std::uint32_t Interpreter::compile(const Expr& e,
                                   std::unordered_map<const ExprNode*, std::uint32_t>& memo) {
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  std::uint32_t dst;
  if (e->op() == Op::Var) {
    auto it = slots_.find(e->name());
    if (it == slots_.end())
      throw IrError(DiagCode::UnknownName, "unknown signal '" + e->name() + "'");
    dst = it->second;
  } else if (e->op() == Op::Const) {
    dst = static_cast<std::uint32_t>(initial_.size());
    initial_.push_back(e->value());
  } else {
    std::uint32_t ops[3] = {0, 0, 0};
    for (std::size_t i = 0; i < e->args().size(); ++i) ops[i] = compile(e->args()[i], memo);
    dst = static_cast<std::uint32_t>(initial_.size());
    initial_.push_back(0);
    unsigned aux = 0;
    if (e->op() == Op::Slice) aux = e->lo();
    if (e->op() == Op::Concat) aux = e->arg(1)->width();
    if (e->op() == Op::RedAnd) aux = e->arg(0)->width();
    program_.push_back({e->op(), e->width(), aux, dst, ops[0], ops[1], ops[2]});
  }
  memo.emplace(e.get(), dst);
  return dst;
}

std::size_t Interpreter::slot(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) throw IrError(DiagCode::UnknownName, "unknown signal '" + name + "'");
  return it->second;
}

std::optional<std::size_t> Interpreter::find_slot(const std::string& name) const {
  auto it = slots_.find(name);
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

void Interpreter::eval(std::vector<std::uint64_t>& f) const {
  std::uint64_t* v = f.data();
  for (const Instr& in : program_) {
    const std::uint64_t m = width_mask(in.width);
    std::uint64_t r = 0;
    switch (in.op) {
      case Op::Not: r = ~v[in.a] & m; break;
      case Op::And: r = v[in.a] & v[in.b]; break;
      case Op::Or: r = v[in.a] | v[in.b]; break;
      case Op::Xor: r = v[in.a] ^ v[in.b]; break;
      case Op::Eq: r = v[in.a] == v[in.b]; break;
      case Op::Neq: r = v[in.a] != v[in.b]; break;
      case Op::Ult: r = v[in.a] < v[in.b]; break;
      case Op::Add: r = (v[in.a] + v[in.b]) & m; break;
      case Op::Sub: r = (v[in.a] - v[in.b]) & m; break;
      case Op::Mux: r = v[in.a] ? v[in.b] : v[in.c]; break;
      case Op::Slice: r = (v[in.a] >> in.aux) & m; break;
      case Op::Concat: r = ((v[in.a] << in.aux) | v[in.b]) & m; break;
      case Op::Zext: r = v[in.a]; break;
      case Op::RedOr: r = v[in.a] != 0; break;
      case Op::RedAnd: r = v[in.a] == width_mask(in.aux); break;
      case Op::Const:
      case Op::Var: break;
    }
    v[in.dst] = r;
  }
}

void Interpreter::advance(std::vector<std::uint64_t>& f) const {
  // Next values may alias other register slots, so stage them first.
  std::vector<std::uint64_t> nx(next_slots_.size());
  for (std::size_t i = 0; i < nx.size(); ++i) nx[i] = f[next_slots_[i]];
  const std::size_t base = ts_.inputs.size() + ts_.analogs.size();
  for (std::size_t i = 0; i < nx.size(); ++i) f[base + i] = nx[i];
}

bool Interpreter::assumptions_hold(const std::vector<std::uint64_t>& f) const {
  for (auto s : assume_slots_)
    if (!f[s]) return false;
  return true;
}

State Interpreter::initial_state() const {
  State s;
  for (const auto& r : ts_.registers) s[r.name] = r.init;
  return s;
}

void Interpreter::load(std::vector<std::uint64_t>& f, const State& s, const Valuation& in) const {
  auto get = [](const Valuation& v, const std::string& n, unsigned w) -> std::uint64_t {
    auto it = v.find(n);
    return it == v.end() ? 0 : it->second & width_mask(w);
  };
  for (const auto& p : ts_.inputs) f[slots_.at(p.name)] = get(in, p.name, p.width);
  for (const auto& a : ts_.analogs) f[slots_.at(a.name)] = get(in, a.name, a.width);
  for (const auto& r : ts_.registers) f[slots_.at(r.name)] = get(s, r.name, r.width);
}

StepResult Interpreter::step(const State& s, const Valuation& in) const {
  auto f = make_frame();
  load(f, s, in);
  eval(f);
  StepResult out;
  for (std::size_t i = 0; i < ts_.registers.size(); ++i)
    out.next[ts_.registers[i].name] = f[next_slots_[i]];
  for (const auto& w : ts_.wires) out.wires[w.name] = f[slots_.at(w.name)];
  for (const auto& o : ts_.outputs) out.outputs[o.name] = f[slots_.at(o.name)];
  for (std::size_t i = 0; i < ts_.assumptions.size(); ++i)
    out.assumptions[ts_.assumptions[i].name] = f[assume_slots_[i]];
  return out;
}

Cycle Interpreter::observe(const State& s, const Valuation& in) const {
  auto f = make_frame();
  load(f, s, in);
  eval(f);
  Cycle c;
  for (const auto& p : ts_.inputs) c.inputs[p.name] = f[slots_.at(p.name)];
  for (const auto& a : ts_.analogs) c.inputs[a.name] = f[slots_.at(a.name)];
  for (const auto& r : ts_.registers) c.registers[r.name] = f[slots_.at(r.name)];
  for (const auto& w : ts_.wires) c.wires[w.name] = f[slots_.at(w.name)];
  for (const auto& o : ts_.outputs) c.outputs[o.name] = f[slots_.at(o.name)];
  return c;
}

StepResult eval_step(const TransitionSystem& ts, const State& s, const Valuation& in) {
  return Interpreter(ts).step(s, in);
}

std::optional<std::uint64_t> lookup(const Cycle& c, const std::string& name) {
  for (const Valuation* v : {&c.inputs, &c.registers, &c.wires, &c.outputs})
    if (auto it = v->find(name); it != v->end()) return it->second;
  return std::nullopt;
}

Trace simulate(const TransitionSystem& ts, const std::vector<Valuation>& inputs) {
  Interpreter interp(ts);
  Trace tr;
  State s = interp.initial_state();
  for (const auto& in : inputs) {
    tr.cycles.push_back(interp.observe(s, in));
    s = interp.step(s, in).next;
  }
  return tr;
}

Trace simulate_from(const TransitionSystem& ts, const State& start,
                    const std::vector<Valuation>& inputs) {
  Interpreter interp(ts);
  Trace tr;
  tr.pseudo = true;
  State s = start;
  for (const auto& in : inputs) {
    tr.cycles.push_back(interp.observe(s, in));
    s = interp.step(s, in).next;
  }
  return tr;
}

namespace {

std::optional<std::string> compare(const char* what, std::size_t cycle, const Valuation& want,
                                   const Valuation& got, bool require_all) {
  for (const auto& [name, v] : want) {
    auto it = got.find(name);
    if (it == got.end()) {
      if (!require_all) continue;
      std::ostringstream os;
      os << "cycle " << cycle << ": " << what << " '" << name << "' missing from trace";
      return os.str();
    }
    if (it->second != v) {
      std::ostringstream os;
      os << "cycle " << cycle << ": " << what << " '" << name << "' is " << it->second
         << ", replay gives " << v;
      return os.str();
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> validate_trace(const TransitionSystem& ts, const Trace& tr) {
  Interpreter interp(ts);
  if (tr.cycles.empty()) return std::nullopt;
  State s = tr.pseudo ? tr.cycles.front().registers : interp.initial_state();
  for (std::size_t i = 0; i < tr.cycles.size(); ++i) {
    const Cycle& c = tr.cycles[i];
    for (const auto& p : ts.inputs)
      if (!c.inputs.count(p.name)) return "cycle " + std::to_string(i) + ": input '" + p.name + "' missing";
    for (const auto& a : ts.analogs)
      if (!c.inputs.count(a.name)) return "cycle " + std::to_string(i) + ": input '" + a.name + "' missing";
    Cycle expect = interp.observe(s, c.inputs);
    if (auto e = compare("register", i, expect.registers, c.registers, true)) return e;
    if (auto e = compare("wire", i, expect.wires, c.wires, false)) return e;
    if (auto e = compare("output", i, expect.outputs, c.outputs, false)) return e;
    s = interp.step(s, c.inputs).next;
  }
  return std::nullopt;
}

}  // namespace formalign::ir
