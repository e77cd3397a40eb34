#include "formalign/ir/lowering.hpp"

namespace formalign::ir {

std::string delayed_name(const std::string& signal, unsigned n) {
  return signal + "_dly" + std::to_string(n);
}

TransitionSystem delay_to_flops(const TransitionSystem& ts, const std::string& signal, unsigned n) {
  if (n == 0) throw IrError(DiagCode::BadRange, "delay of 0 cycles: use '" + signal + "' directly");
  auto info = ts.find(signal);
  if (!info || info->kind == SignalKind::Assumption)
    throw IrError(DiagCode::UnknownName, "unknown signal '" + signal + "'");
  TransitionSystem out = ts;
  const std::string base = delayed_name(signal, n);
  Expr prev = ts.ref(signal);
  for (unsigned i = 1; i <= n; ++i) {
    const std::string r = base + "_r" + std::to_string(i);
    out.add_register(r, info->width, 0, prev);
    prev = var(r, info->width);
  }
  out.add_wire(base, prev);
  return out;
}

TransitionSystem lower_analog_ports(const TransitionSystem& ts) {
  TransitionSystem out = ts;
  out.analogs.clear();
  std::vector<std::pair<std::string, Expr>> ranges;
  for (const auto& a : ts.analogs) {
    if (a.range) {
      const auto [lo, hi] = *a.range;
      if (lo > hi)
        throw IrError(DiagCode::BadRange, "analog '" + a.name + "' has min " + std::to_string(lo) +
                                              " > max " + std::to_string(hi));
      if ((hi & ~width_mask(a.width)) != 0)
        throw IrError(DiagCode::BadRange, "analog '" + a.name + "' range exceeds its width");
      Expr v = var(a.name, a.width);
      Expr in_range = band(bnot(ult(v, constant(a.width, lo))), bnot(ult(constant(a.width, hi), v)));
      ranges.emplace_back(a.name + "_in_range", in_range);
    }
    out.add_input(a.name, a.width);
  }
  for (auto& [name, e] : ranges) out.add_assumption(name, e);
  return out;
}

}  // namespace formalign::ir
