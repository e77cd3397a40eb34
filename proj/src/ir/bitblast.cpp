#include "formalign/ir/bitblast.hpp"

#include <utility>

namespace formalign::ir {

GateGraph::GateGraph() {
  gates_.push_back({GateKind::False});
  gates_.push_back({GateKind::True});
}

Node GateGraph::input(std::string name) {
  const Node n = static_cast<Node>(gates_.size());
  gates_.push_back({GateKind::Input});
  if (!name.empty()) names_.emplace(n, std::move(name));
  return n;
}

const std::string& GateGraph::input_name(Node n) const {
  static const std::string empty;
  auto it = names_.find(n);
  return it == names_.end() ? empty : it->second;
}

Node GateGraph::intern(GateKind k, Node a, Node b) {
  const std::uint64_t key =
      (static_cast<std::uint64_t>(k) << 60) | (static_cast<std::uint64_t>(a) << 30) | b;
  auto [it, fresh] = table_.try_emplace(key, static_cast<Node>(gates_.size()));
  if (fresh) gates_.push_back({k, a, b});
  return it->second;
}

Node GateGraph::lnot(Node a) {
  if (a == kFalse) return kTrue;
  if (a == kTrue) return kFalse;
  if (gates_[a].kind == GateKind::Not) return gates_[a].a;
  return intern(GateKind::Not, a, 0);
}

namespace {
bool complementary(const std::vector<Gate>& g, Node a, Node b) {
  return (g[a].kind == GateKind::Not && g[a].a == b) || (g[b].kind == GateKind::Not && g[b].a == a);
}
}  // namespace

Node GateGraph::land(Node a, Node b) {
  if (a == kFalse || b == kFalse) return kFalse;
  if (a == kTrue) return b;
  if (b == kTrue) return a;
  if (a == b) return a;
  if (complementary(gates_, a, b)) return kFalse;
  if (a > b) std::swap(a, b);
  return intern(GateKind::And, a, b);
}

Node GateGraph::lor(Node a, Node b) {
  if (a == kTrue || b == kTrue) return kTrue;
  if (a == kFalse) return b;
  if (b == kFalse) return a;
  if (a == b) return a;
  if (complementary(gates_, a, b)) return kTrue;
  if (a > b) std::swap(a, b);
  return intern(GateKind::Or, a, b);
}

Node GateGraph::lxor(Node a, Node b) {
  if (a == kFalse) return b;
  if (b == kFalse) return a;
  if (a == kTrue) return lnot(b);
  if (b == kTrue) return lnot(a);
  if (a == b) return kFalse;
  if (complementary(gates_, a, b)) return kTrue;
  // Push negations outward so x^!y and !x^y share x^y.
  bool neg = false;
  if (gates_[a].kind == GateKind::Not) {
    a = gates_[a].a;
    neg = !neg;
  }
  if (gates_[b].kind == GateKind::Not) {
    b = gates_[b].a;
    neg = !neg;
  }
  if (a > b) std::swap(a, b);
  const Node x = intern(GateKind::Xor, a, b);
  return neg ? lnot(x) : x;
}

Node GateGraph::lmux(Node c, Node t, Node e) {
  if (c == kTrue) return t;
  if (c == kFalse) return e;
  if (t == e) return t;
  if (t == kTrue && e == kFalse) return c;
  if (t == kFalse && e == kTrue) return lnot(c);
  return lor(land(c, t), land(lnot(c), e));
}

std::vector<std::uint8_t> GateGraph::evaluate(const std::function<bool(Node)>& inputs) const {
  std::vector<std::uint8_t> v(gates_.size(), 0);
  for (Node i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case GateKind::False: v[i] = 0; break;
      case GateKind::True: v[i] = 1; break;
      case GateKind::Input: v[i] = inputs(i) ? 1 : 0; break;
      case GateKind::Not: v[i] = !v[g.a]; break;
      case GateKind::And: v[i] = v[g.a] & v[g.b]; break;
      case GateKind::Or: v[i] = v[g.a] | v[g.b]; break;
      case GateKind::Xor: v[i] = v[g.a] ^ v[g.b]; break;
    }
  }
  return v;
}

Bits blast_const(unsigned width, std::uint64_t value) {
  Bits out(width);
  for (unsigned i = 0; i < width; ++i) out[i] = ((value >> i) & 1) ? GateGraph::kTrue : GateGraph::kFalse;
  return out;
}

Bits blast_add(GateGraph& g, const Bits& a, const Bits& b, Node carry) {
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node axb = g.lxor(a[i], b[i]);
    out[i] = g.lxor(axb, carry);
    if (i + 1 < a.size()) carry = g.lor(g.land(a[i], b[i]), g.land(carry, axb));
  }
  return out;
}

Bits blast_sub(GateGraph& g, const Bits& a, const Bits& b) {
  Bits nb(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) nb[i] = g.lnot(b[i]);
  return blast_add(g, a, nb, GateGraph::kTrue);
}

Node blast_ult(GateGraph& g, const Bits& a, const Bits& b) {
  // a < b exactly when a - b borrows, i.e. a + ~b + 1 has no carry out.
  Node carry = GateGraph::kTrue;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Node nb = g.lnot(b[i]);
    const Node axb = g.lxor(a[i], nb);
    carry = g.lor(g.land(a[i], nb), g.land(carry, axb));
  }
  return g.lnot(carry);
}

Node blast_eq(GateGraph& g, const Bits& a, const Bits& b) {
  Node acc = GateGraph::kTrue;
  for (std::size_t i = 0; i < a.size(); ++i) acc = g.land(acc, g.lxnor(a[i], b[i]));
  return acc;
}

const Bits& ExprBlaster::blast(const Expr& e) {
  if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
  Bits out;
  switch (e->op()) {
    case Op::Const:
      out = blast_const(e->width(), e->value());
      break;
    case Op::Var:
      out = leaf_(e->name());
      break;
    default: {
      // Operands are copied: recursive calls may rehash memo_.
      std::vector<Bits> v;
      for (const auto& a : e->args()) v.push_back(blast(a));
      const unsigned w = e->width();
      out.resize(w);
      switch (e->op()) {
        case Op::Not:
          for (unsigned i = 0; i < w; ++i) out[i] = g_.lnot(v[0][i]);
          break;
        case Op::And:
          for (unsigned i = 0; i < w; ++i) out[i] = g_.land(v[0][i], v[1][i]);
          break;
        case Op::Or:
          for (unsigned i = 0; i < w; ++i) out[i] = g_.lor(v[0][i], v[1][i]);
          break;
        case Op::Xor:
          for (unsigned i = 0; i < w; ++i) out[i] = g_.lxor(v[0][i], v[1][i]);
          break;
        case Op::Eq:
          out[0] = blast_eq(g_, v[0], v[1]);
          break;
        case Op::Neq:
          out[0] = g_.lnot(blast_eq(g_, v[0], v[1]));
          break;
        case Op::Ult:
          out[0] = blast_ult(g_, v[0], v[1]);
          break;
        case Op::Add:
          out = blast_add(g_, v[0], v[1]);
          break;
        case Op::Sub:
          out = blast_sub(g_, v[0], v[1]);
          break;
        case Op::Mux:
          for (unsigned i = 0; i < w; ++i) out[i] = g_.lmux(v[0][0], v[1][i], v[2][i]);
          break;
        case Op::Slice:
          for (unsigned i = 0; i < w; ++i) out[i] = v[0][e->lo() + i];
          break;
        case Op::Concat: {
          const std::size_t lo_w = v[1].size();
          for (unsigned i = 0; i < w; ++i) out[i] = i < lo_w ? v[1][i] : v[0][i - lo_w];
          break;
        }
        case Op::Zext:
          for (unsigned i = 0; i < w; ++i) out[i] = i < v[0].size() ? v[0][i] : GateGraph::kFalse;
          break;
        case Op::RedOr: {
          Node acc = GateGraph::kFalse;
          for (Node b : v[0]) acc = g_.lor(acc, b);
          out[0] = acc;
          break;
        }
        case Op::RedAnd: {
          Node acc = GateGraph::kTrue;
          for (Node b : v[0]) acc = g_.land(acc, b);
          out[0] = acc;
          break;
        }
        case Op::Const:
        case Op::Var:
          break;
      }
    }
  }
  return memo_.emplace(e.get(), std::move(out)).first->second;
}

std::vector<Bits> blast_frame(GateGraph& g, const TransitionSystem& ts,
                              std::unordered_map<std::string, Bits>& bits,
                              std::vector<Node>* assumptions) {
  ExprBlaster blaster(g, [&](const std::string& name) -> const Bits& {
    auto it = bits.find(name);
    if (it == bits.end()) throw IrError(DiagCode::UnknownName, "no bits for '" + name + "'");
    return it->second;
  });
  for (const Definition* d : ts.combinational_order()) bits[d->name] = blaster.blast(d->expr);
  if (assumptions)
    for (const auto& a : ts.assumptions) assumptions->push_back(blaster.blast(a.expr)[0]);
  std::vector<Bits> next;
  next.reserve(ts.registers.size());
  for (const auto& r : ts.registers) next.push_back(blaster.blast(r.next));
  return next;
}

BitNetlist bitblast(const TransitionSystem& ts) {
  BitNetlist net;
  std::unordered_map<std::string, Bits> bits;
  auto leaves = [&](const std::string& name, unsigned width) {
    Bits b(width);
    for (unsigned i = 0; i < width; ++i) b[i] = net.graph.input(name + "[" + std::to_string(i) + "]");
    bits[name] = b;
  };
  for (const auto& p : ts.inputs) leaves(p.name, p.width);
  for (const auto& a : ts.analogs) leaves(a.name, a.width);
  for (const auto& r : ts.registers) leaves(r.name, r.width);
  std::vector<Node> assumptions;
  auto next = blast_frame(net.graph, ts, bits, &assumptions);
  for (std::size_t i = 0; i < ts.registers.size(); ++i) net.next[ts.registers[i].name] = next[i];
  for (std::size_t i = 0; i < ts.assumptions.size(); ++i)
    net.assumptions[ts.assumptions[i].name] = assumptions[i];
  for (auto& [name, b] : bits) net.signals.emplace(name, std::move(b));
  return net;
}

std::uint64_t word_value(const Bits& bits, const std::vector<std::uint8_t>& values) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (values[bits[i]]) v |= std::uint64_t{1} << i;
  return v;
}

}  // namespace formalign::ir
