#include "formalign/engine/unroll.hpp"

#include <algorithm>
#include <stdexcept>

namespace formalign::engine {

UnrollContext::UnrollContext(const ir::TransitionSystem& ts, bool pin_init)
    : ts_(ts), pin_init_(pin_init) {
  if (!ts_.analogs.empty()) throw std::invalid_argument("unroll: analog ports must be lowered first");
  ts_.check();
}

void UnrollContext::ensure(unsigned count) {
  while (frames_.size() < count) add_frame();
}

void UnrollContext::add_frame() {
  const unsigned f = frames();
  Frame fr;
  auto fresh = [&](const std::string& name, unsigned width) {
    ir::Bits b(width);
    for (unsigned i = 0; i < width; ++i)
      b[i] = graph_.input(name + "@" + std::to_string(f) + "[" + std::to_string(i) + "]");
    return b;
  };
  for (const auto& p : ts_.inputs) {
    fr.inputs.push_back(fresh(p.name, p.width));
    fr.bits[p.name] = fr.inputs.back();
  }
  for (std::size_t i = 0; i < ts_.registers.size(); ++i) {
    const auto& r = ts_.registers[i];
    ir::Bits b;
    if (f > 0) b = pending_next_[i];
    else if (pin_init_) b = ir::blast_const(r.width, r.init);
    else b = fresh(r.name, r.width);
    fr.state.push_back(b);
    fr.bits[r.name] = std::move(b);
  }
  pending_next_ = ir::blast_frame(graph_, ts_, fr.bits, &fr.assumptions);
  for (ir::Node a : fr.assumptions) fr.assume_all = graph_.land(fr.assume_all, a);
  frames_.push_back(std::move(fr));
}

const ir::Bits& UnrollContext::signal(unsigned frame, const std::string& name) {
  ensure(frame + 1);
  auto& bits = frames_[frame].bits;
  auto it = bits.find(name);
  if (it == bits.end()) throw std::out_of_range("unroll: no signal '" + name + "'");
  return it->second;
}

ir::Node UnrollContext::assumptions(unsigned frame) {
  ensure(frame + 1);
  return frames_[frame].assume_all;
}

ir::Node UnrollContext::states_differ(unsigned i, unsigned j) {
  ensure(std::max(i, j) + 1);
  ir::Node d = ir::GateGraph::kFalse;
  for (std::size_t r = 0; r < ts_.registers.size(); ++r) {
    const auto& a = frames_[i].state[r];
    const auto& b = frames_[j].state[r];
    for (std::size_t k = 0; k < a.size(); ++k) d = graph_.lor(d, graph_.lxor(a[k], b[k]));
  }
  return d;
}

ir::Trace UnrollContext::extract_trace(const std::function<bool(ir::Node)>& input_value,
                                       unsigned count) {
  ensure(count);
  const auto values = graph_.evaluate([&](ir::Node n) { return input_value(n); });
  std::vector<ir::Valuation> stim(count);
  for (unsigned f = 0; f < count; ++f)
    for (std::size_t i = 0; i < ts_.inputs.size(); ++i)
      stim[f][ts_.inputs[i].name] = ir::word_value(frames_[f].inputs[i], values);

  ir::Trace tr;
  if (pin_init_) {
    tr = ir::simulate(ts_, stim);
  } else {
    ir::State start;
    for (std::size_t i = 0; i < ts_.registers.size(); ++i)
      start[ts_.registers[i].name] = ir::word_value(frames_[0].state[i], values);
    tr = ir::simulate_from(ts_, start, stim);
  }

  for (unsigned f = 0; f < count; ++f) {
    const auto& cyc = tr.cycles[f];
    for (const auto& [name, bits] : frames_[f].bits) {
      const std::uint64_t gate_value = ir::word_value(bits, values);
      std::uint64_t replay;
      if (auto it = cyc.registers.find(name); it != cyc.registers.end()) replay = it->second;
      else if (auto w = cyc.wires.find(name); w != cyc.wires.end()) replay = w->second;
      else if (auto o = cyc.outputs.find(name); o != cyc.outputs.end()) replay = o->second;
      else replay = cyc.inputs.at(name);
      if (gate_value != replay)
        throw std::logic_error("trace replay diverges at cycle " + std::to_string(f) + " on '" +
                               name + "': encoded " + std::to_string(gate_value) + ", replay " +
                               std::to_string(replay));
    }
  }
  return tr;
}

}  // namespace formalign::engine
