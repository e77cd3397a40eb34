#include "formalign/ir/transition_system.hpp"

#include <functional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace formalign::ir {

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  if (line > 0) os << line << ':' << col << ": ";
  os << diag_code_name(code) << ": " << message;
  return os.str();
}

std::optional<SignalInfo> TransitionSystem::find(const std::string& n) const {
  for (std::size_t i = 0; i < inputs.size(); ++i)
    if (inputs[i].name == n) return SignalInfo{SignalKind::Input, inputs[i].width, i};
  for (std::size_t i = 0; i < analogs.size(); ++i)
    if (analogs[i].name == n) return SignalInfo{SignalKind::Analog, analogs[i].width, i};
  for (std::size_t i = 0; i < registers.size(); ++i)
    if (registers[i].name == n)
      return SignalInfo{SignalKind::Register, registers[i].width, i};
  for (std::size_t i = 0; i < wires.size(); ++i)
    if (wires[i].name == n)
      return SignalInfo{SignalKind::Wire, wires[i].expr ? wires[i].expr->width() : 0, i};
  for (std::size_t i = 0; i < outputs.size(); ++i)
    if (outputs[i].name == n)
      return SignalInfo{SignalKind::Output, outputs[i].expr ? outputs[i].expr->width() : 0, i};
  for (std::size_t i = 0; i < assumptions.size(); ++i)
    if (assumptions[i].name == n) return SignalInfo{SignalKind::Assumption, 1, i};
  return std::nullopt;
}

unsigned TransitionSystem::width_of(const std::string& n) const {
  auto info = find(n);
  if (!info || info->kind == SignalKind::Assumption) {
    throw IrError(DiagCode::UnknownName, "unknown signal '" + n + "'");
  }
  return info->width;
}

Expr TransitionSystem::ref(const std::string& n) const { return var(n, width_of(n)); }

Register* TransitionSystem::find_register(const std::string& n) {
  for (auto& r : registers)
    if (r.name == n) return &r;
  return nullptr;
}

const Register* TransitionSystem::find_register(const std::string& n) const {
  for (const auto& r : registers)
    if (r.name == n) return &r;
  return nullptr;
}

void TransitionSystem::claim(const std::string& n) const {
  if (n.empty()) throw IrError(DiagCode::Syntax, "empty signal name");
  if (has(n)) throw IrError(DiagCode::DuplicateName, "duplicate name '" + n + "'");
}

void TransitionSystem::add_input(const std::string& n, unsigned width) {
  claim(n);
  if (width == 0 || width > kMaxWidth)
    throw IrError(DiagCode::WidthMismatch, "input '" + n + "' has invalid width");
  inputs.push_back({n, width});
}

void TransitionSystem::add_analog(const std::string& n, unsigned width,
                                  std::optional<std::pair<std::uint64_t, std::uint64_t>> range) {
  claim(n);
  if (width == 0 || width > kMaxWidth)
    throw IrError(DiagCode::WidthMismatch, "analog '" + n + "' has invalid width");
  analogs.push_back({n, width, range});
}

void TransitionSystem::add_register(const std::string& n, unsigned width, std::uint64_t init,
                                    Expr next) {
  claim(n);
  if (width == 0 || width > kMaxWidth)
    throw IrError(DiagCode::WidthMismatch, "register '" + n + "' has invalid width");
  if ((init & ~width_mask(width)) != 0)
    throw IrError(DiagCode::WidthMismatch, "init of '" + n + "' does not fit its width");
  registers.push_back({n, width, init, std::move(next)});
}

void TransitionSystem::set_next(const std::string& reg, Expr next) {
  Register* r = find_register(reg);
  if (!r) throw IrError(DiagCode::UnknownName, "next for unknown register '" + reg + "'");
  if (next && next->width() != r->width) {
    throw IrError(DiagCode::WidthMismatch,
                  "next of '" + reg + "' has width " + std::to_string(next->width()) +
                      ", register is " + std::to_string(r->width));
  }
  r->next = std::move(next);
}

void TransitionSystem::add_wire(const std::string& n, Expr e) {
  claim(n);
  wires.push_back({n, std::move(e)});
}

void TransitionSystem::add_output(const std::string& n, Expr e) {
  claim(n);
  outputs.push_back({n, std::move(e)});
}

void TransitionSystem::add_assumption(const std::string& n, Expr e) {
  claim(n);
  if (e && e->width() != 1)
    throw IrError(DiagCode::WidthMismatch, "assumption '" + n + "' must be 1 bit");
  assumptions.push_back({n, std::move(e)});
}

namespace {

// Collect var-width mismatches and unknown names inside an expression.
void check_expr(const TransitionSystem& ts, const Expr& e, const std::string& owner,
                std::vector<Diagnostic>& out) {
  std::unordered_set<const ExprNode*> seen;
  std::vector<const ExprNode*> stack{e.get()};
  while (!stack.empty()) {
    const ExprNode* n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    if (n->op() == Op::Var) {
      auto info = ts.find(n->name());
      if (!info || info->kind == SignalKind::Assumption) {
        out.push_back({DiagCode::UnknownName,
                       "'" + owner + "' references unknown signal '" + n->name() + "'"});
      } else if (info->width != n->width()) {
        out.push_back({DiagCode::WidthMismatch, "'" + owner + "' reads '" + n->name() +
                                                    "' as " + std::to_string(n->width()) +
                                                    " bits, declared " +
                                                    std::to_string(info->width)});
      }
    }
    for (const auto& a : n->args()) stack.push_back(a.get());
  }
}

}  // namespace

std::vector<Diagnostic> TransitionSystem::validate() const {
  std::vector<Diagnostic> out;
  std::unordered_set<std::string> names;
  auto unique = [&](const std::string& n) {
    if (!names.insert(n).second)
      out.push_back({DiagCode::DuplicateName, "duplicate name '" + n + "'"});
  };
  for (const auto& p : inputs) unique(p.name);
  for (const auto& a : analogs) {
    unique(a.name);
    if (a.range && a.range->first > a.range->second)
      out.push_back({DiagCode::BadRange, "analog '" + a.name + "' has min > max"});
    if (a.range && (a.range->second & ~width_mask(a.width)) != 0)
      out.push_back({DiagCode::BadRange, "analog '" + a.name + "' range exceeds width"});
  }
  for (const auto& r : registers) {
    unique(r.name);
    if ((r.init & ~width_mask(r.width)) != 0)
      out.push_back({DiagCode::WidthMismatch, "init of '" + r.name + "' does not fit"});
    if (!r.next) {
      out.push_back({DiagCode::MissingNext, "register '" + r.name + "' has no next"});
    } else {
      if (r.next->width() != r.width)
        out.push_back({DiagCode::WidthMismatch, "next of '" + r.name + "' has width " +
                                                    std::to_string(r.next->width()) +
                                                    ", register is " +
                                                    std::to_string(r.width)});
      check_expr(*this, r.next, r.name, out);
    }
  }
  for (const auto* defs : {&wires, &outputs, &assumptions}) {
    for (const auto& d : *defs) {
      unique(d.name);
      if (!d.expr) {
        out.push_back({DiagCode::Syntax, "'" + d.name + "' has no definition"});
        continue;
      }
      check_expr(*this, d.expr, d.name, out);
    }
  }
  for (const auto& d : assumptions)
    if (d.expr && d.expr->width() != 1)
      out.push_back({DiagCode::WidthMismatch, "assumption '" + d.name + "' must be 1 bit"});

  // Combinational cycles through wires/outputs.
  std::unordered_map<std::string, const Definition*> comb;
  for (const auto& d : wires) comb[d.name] = &d;
  for (const auto& d : outputs) comb[d.name] = &d;
  std::unordered_map<std::string, int> mark;  // 1 = on stack, 2 = done
  std::function<bool(const std::string&, std::vector<std::string>&)> dfs =
      [&](const std::string& n, std::vector<std::string>& path) -> bool {
    auto it = comb.find(n);
    if (it == comb.end() || !it->second->expr) return false;
    int& m = mark[n];
    if (m == 2) return false;
    if (m == 1) {
      path.push_back(n);
      return true;
    }
    m = 1;
    path.push_back(n);
    for (const auto& dep : support(it->second->expr))
      if (dfs(dep, path)) return true;
    path.pop_back();
    m = 2;
    return false;
  };
  for (const auto& [n, d] : comb) {
    (void)d;
    std::vector<std::string> path;
    if (dfs(n, path)) {
      std::string msg = "combinational cycle:";
      for (const auto& p : path) msg += " " + p;
      out.push_back({DiagCode::CombinationalCycle, msg});
      break;
    }
  }
  return out;
}

void TransitionSystem::check() const {
  auto diags = validate();
  if (!diags.empty()) throw IrError(diags.front().code, diags.front().message);
}

std::vector<const Definition*> TransitionSystem::combinational_order() const {
  std::unordered_map<std::string, const Definition*> comb;
  for (const auto& d : wires) comb[d.name] = &d;
  for (const auto& d : outputs) comb[d.name] = &d;
  std::vector<const Definition*> order;
  std::unordered_set<std::string> done;
  // Iterative post-order DFS in declaration order keeps the result stable.
  auto visit = [&](const Definition* root) {
    std::vector<std::pair<const Definition*, std::size_t>> stack;
    std::vector<std::vector<std::string>> deps;
    if (done.count(root->name)) return;
    stack.push_back({root, 0});
    deps.push_back(support(root->expr));
    std::unordered_set<std::string> on_stack{root->name};
    while (!stack.empty()) {
      auto& [def, idx] = stack.back();
      auto& d = deps.back();
      if (idx < d.size()) {
        const std::string& dep = d[idx++];
        auto it = comb.find(dep);
        if (it == comb.end() || done.count(dep)) continue;
        if (on_stack.count(dep))
          throw IrError(DiagCode::CombinationalCycle, "combinational cycle at '" + dep + "'");
        on_stack.insert(dep);
        stack.push_back({it->second, 0});
        deps.push_back(support(it->second->expr));
        continue;
      }
      done.insert(def->name);
      on_stack.erase(def->name);
      order.push_back(def);
      stack.pop_back();
      deps.pop_back();
    }
  };
  for (const auto& d : wires) visit(&d);
  for (const auto& d : outputs) visit(&d);
  return order;
}

std::size_t TransitionSystem::state_bits() const {
  std::size_t n = 0;
  for (const auto& r : registers) n += r.width;
  return n;
}

std::size_t TransitionSystem::input_bits() const {
  std::size_t n = 0;
  for (const auto& p : inputs) n += p.width;
  for (const auto& a : analogs) n += a.width;
  return n;
}

}  // namespace formalign::ir
