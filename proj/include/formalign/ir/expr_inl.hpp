#pragma once

#include <unordered_map>

namespace formalign::ir {

namespace detail {

// Word-level semantics of one node given its operand values.
inline std::uint64_t apply(const ExprNode& n, const std::uint64_t* v) {
  const unsigned w = n.width();
  switch (n.op()) {
    case Op::Const:
      return n.value();
    case Op::Var:
      return 0;  // resolved by the caller
    case Op::Not:
      return ~v[0] & width_mask(w);
    case Op::And:
      return v[0] & v[1];
    case Op::Or:
      return v[0] | v[1];
    case Op::Xor:
      return v[0] ^ v[1];
    case Op::Eq:
      return v[0] == v[1] ? 1 : 0;
    case Op::Neq:
      return v[0] != v[1] ? 1 : 0;
    case Op::Ult:
      return v[0] < v[1] ? 1 : 0;
    case Op::Add:
      return (v[0] + v[1]) & width_mask(w);
    case Op::Sub:
      return (v[0] - v[1]) & width_mask(w);
    case Op::Mux:
      return v[0] ? v[1] : v[2];
    case Op::Slice:
      return (v[0] >> n.lo()) & width_mask(w);
    case Op::Concat: {
      const unsigned lo_w = n.arg(1)->width();
      return ((v[0] << lo_w) | v[1]) & width_mask(w);
    }
    case Op::Zext:
      return v[0];
    case Op::RedOr:
      return v[0] != 0 ? 1 : 0;
    case Op::RedAnd:
      return v[0] == width_mask(n.arg(0)->width()) ? 1 : 0;
  }
  return 0;
}

}  // namespace detail

template <typename Lookup>
std::uint64_t evaluate(const Expr& e, Lookup&& lookup) {
  std::unordered_map<const ExprNode*, std::uint64_t> memo;
  auto rec = [&](auto&& self, const ExprNode& n) -> std::uint64_t {
    if (n.op() == Op::Var) return lookup(n.name()) & width_mask(n.width());
    if (n.op() == Op::Const) return n.value();
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    std::uint64_t vals[3] = {0, 0, 0};
    for (std::size_t i = 0; i < n.args().size(); ++i) vals[i] = self(self, *n.args()[i]);
    const std::uint64_t r = detail::apply(n, vals);
    memo.emplace(&n, r);
    return r;
  };
  return rec(rec, *e);
}

template <typename Fn>
Expr substitute(const Expr& e, Fn&& fn) {
  std::unordered_map<const ExprNode*, Expr> memo;
  auto rec = [&](auto&& self, const Expr& n) -> Expr {
    if (auto it = memo.find(n.get()); it != memo.end()) return it->second;
    Expr out;
    if (n->op() == Op::Var) {
      Expr r = fn(*n);
      out = r ? r : n;
    } else if (n->args().empty()) {
      out = n;
    } else {
      std::vector<Expr> args;
      bool changed = false;
      for (const auto& a : n->args()) {
        args.push_back(self(self, a));
        changed = changed || args.back() != a;
      }
      if (!changed) {
        out = n;
      } else {
        std::vector<std::uint64_t> params;
        if (n->op() == Op::Slice) params = {n->hi(), n->lo()};
        if (n->op() == Op::Zext) params = {n->width()};
        out = make(n->op(), std::move(args), std::move(params));
      }
    }
    memo.emplace(n.get(), out);
    return out;
  };
  return rec(rec, e);
}

}  // namespace formalign::ir
