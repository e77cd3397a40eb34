#include "formalign/engine/coi.hpp"

#include <set>

namespace formalign::engine {

ir::TransitionSystem cone_of_influence(const ir::TransitionSystem& ts,
                                       const std::vector<std::string>& roots) {
  std::set<std::string> keep;
  std::vector<std::string> work;
  auto visit_expr = [&](const ir::Expr& e) {
    for (const auto& n : ir::support(e))
      if (keep.insert(n).second) work.push_back(n);
  };
  for (const auto& r : roots) {
    ts.width_of(r);
    if (keep.insert(r).second) work.push_back(r);
  }
  for (const auto& a : ts.assumptions) visit_expr(a.expr);

  while (!work.empty()) {
    const std::string n = work.back();
    work.pop_back();
    auto info = ts.find(n);
    switch (info->kind) {
      case ir::SignalKind::Register:
        visit_expr(ts.registers[info->index].next);
        break;
      case ir::SignalKind::Wire:
        visit_expr(ts.wires[info->index].expr);
        break;
      case ir::SignalKind::Output:
        visit_expr(ts.outputs[info->index].expr);
        break;
      default:
        break;
    }
  }

  ir::TransitionSystem out;
  out.name = ts.name;
  for (const auto& p : ts.inputs)
    if (keep.count(p.name)) out.inputs.push_back(p);
  for (const auto& a : ts.analogs)
    if (keep.count(a.name)) out.analogs.push_back(a);
  for (const auto& r : ts.registers)
    if (keep.count(r.name)) out.registers.push_back(r);
  for (const auto& w : ts.wires)
    if (keep.count(w.name)) out.wires.push_back(w);
  for (const auto& o : ts.outputs)
    if (keep.count(o.name)) out.outputs.push_back(o);
  out.assumptions = ts.assumptions;
  return out;
}

}  // namespace formalign::engine
