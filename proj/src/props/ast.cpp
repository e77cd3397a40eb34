#include "formalign/props/ast.hpp"

#include <algorithm>
#include <unordered_set>

namespace formalign::props {

namespace {
BExprPtr node(BExpr::Kind k, std::vector<BExprPtr> args) {
  auto e = std::make_shared<BExpr>();
  e->kind = k;
  e->args = std::move(args);
  return e;
}
}  // namespace

BExprPtr make_const(std::uint64_t v) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Const;
  e->value = v;
  return e;
}

BExprPtr make_ref(std::string name, std::optional<std::pair<unsigned, unsigned>> range) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Ref;
  e->name = std::move(name);
  e->range = range;
  return e;
}

BExprPtr make_past(BExprPtr inner, unsigned n) {
  auto e = std::make_shared<BExpr>();
  e->kind = BExpr::Kind::Past;
  e->depth = n;
  e->args = {std::move(inner)};
  return e;
}

BExprPtr make_stable(BExprPtr e) { return node(BExpr::Kind::Stable, {std::move(e)}); }
BExprPtr make_not(BExprPtr e) { return node(BExpr::Kind::Not, {std::move(e)}); }
BExprPtr make_and(BExprPtr a, BExprPtr b) { return node(BExpr::Kind::And, {std::move(a), std::move(b)}); }
BExprPtr make_or(BExprPtr a, BExprPtr b) { return node(BExpr::Kind::Or, {std::move(a), std::move(b)}); }
BExprPtr make_eq(BExprPtr a, BExprPtr b) { return node(BExpr::Kind::Eq, {std::move(a), std::move(b)}); }
BExprPtr make_neq(BExprPtr a, BExprPtr b) { return node(BExpr::Kind::Neq, {std::move(a), std::move(b)}); }

bool same(const BExprPtr& a, const BExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name || a->range != b->range ||
      a->depth != b->depth || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i])) return false;
  return true;
}

std::vector<std::string> references(const BExprPtr& e) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::vector<const BExpr*> stack{e.get()};
  while (!stack.empty()) {
    const BExpr* n = stack.back();
    stack.pop_back();
    if (n->kind == BExpr::Kind::Ref && seen.insert(n->name).second) out.push_back(n->name);
    for (auto it = n->args.rbegin(); it != n->args.rend(); ++it) stack.push_back(it->get());
  }
  return out;
}

unsigned max_history(const BExprPtr& e) {
  unsigned inner = 0;
  for (const auto& a : e->args) inner = std::max(inner, max_history(a));
  if (e->kind == BExpr::Kind::Past) return inner + e->depth;
  if (e->kind == BExpr::Kind::Stable) return inner + 1;
  return inner;
}

unsigned Sequence::length() const {
  unsigned n = 0;
  for (const auto& i : items) n += i.delay;
  return n;
}

std::vector<unsigned> Sequence::offsets() const {
  std::vector<unsigned> out;
  unsigned at = 0;
  for (const auto& i : items) {
    at += i.delay;
    out.push_back(at);
  }
  return out;
}

const Property* PropFile::find(const std::string& name) const {
  for (const auto& p : props)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace formalign::props
