#pragma once

// Explicit-state reachability over every input combination.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formalign/ir/interp.hpp"

namespace oracles {

namespace ir = formalign::ir;

using StateKey = std::vector<std::uint64_t>;

inline std::vector<ir::Valuation> all_inputs(const ir::TransitionSystem& ts) {
  unsigned bits = 0;
  for (const auto& p : ts.inputs) bits += p.width;
  std::vector<ir::Valuation> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
    ir::Valuation in;
    unsigned at = 0;
    for (const auto& p : ts.inputs) {
      in[p.name] = (v >> at) & ir::width_mask(p.width);
      at += p.width;
    }
    out.push_back(in);
  }
  return out;
}

inline std::vector<StateKey> all_states(const ir::TransitionSystem& ts) {
  std::vector<StateKey> out{{}};
  for (const auto& r : ts.registers) {
    std::vector<StateKey> grown;
    for (const auto& s : out)
      for (std::uint64_t v = 0; v <= ir::width_mask(r.width); ++v) {
        grown.push_back(s);
        grown.back().push_back(v);
      }
    out = std::move(grown);
  }
  return out;
}

inline ir::State to_state(const ir::TransitionSystem& ts, const StateKey& k) {
  ir::State s;
  for (std::size_t i = 0; i < ts.registers.size(); ++i) s[ts.registers[i].name] = k[i];
  return s;
}

inline StateKey to_key(const ir::TransitionSystem& ts, const ir::State& s) {
  StateKey k;
  for (const auto& r : ts.registers) k.push_back(s.at(r.name));
  return k;
}

struct Edge {
  StateKey next;
  bool ok;  // `ok` under this input in the source state
};

// Slot-level stepping, fast enough for a few thousand states.
class Stepper {
 public:
  Stepper(const ir::TransitionSystem& ts, const std::string& ok)
      : interp_(ts), inputs_(all_inputs(ts)), frame_(interp_.make_frame()) {
    for (const auto& r : ts.registers) reg_slots_.push_back(interp_.slot(r.name));
    for (const auto& p : ts.inputs) in_slots_.push_back(interp_.slot(p.name));
    ok_slot_ = interp_.slot(ok);
  }

  const ir::TransitionSystem& system() const { return interp_.system(); }

  // Successors under every input admitted by the assumptions.
  std::vector<Edge> successors(const StateKey& k) {
    const auto& ts = interp_.system();
    std::vector<Edge> out;
    for (const auto& v : inputs_) {
      for (std::size_t i = 0; i < reg_slots_.size(); ++i) frame_[reg_slots_[i]] = k[i];
      for (std::size_t i = 0; i < in_slots_.size(); ++i) frame_[in_slots_[i]] = v.at(ts.inputs[i].name);
      interp_.eval(frame_);
      if (!interp_.assumptions_hold(frame_)) continue;
      Edge e;
      e.ok = frame_[ok_slot_] == 1;
      for (std::size_t i = 0; i < reg_slots_.size(); ++i) e.next.push_back(frame_[interp_.next_slot(i)]);
      out.push_back(std::move(e));
    }
    return out;
  }

  StateKey initial() const { return to_key(interp_.system(), interp_.initial_state()); }

 private:
  ir::Interpreter interp_;
  std::vector<ir::Valuation> inputs_;
  std::vector<std::uint64_t> frame_;
  std::vector<std::size_t> reg_slots_, in_slots_;
  std::size_t ok_slot_;
};

struct BfsResult {
  std::optional<unsigned> bad_distance;  // first frame where ok can be 0
  std::set<StateKey> reachable;
  unsigned diameter = 0;  // largest BFS layer index
};

inline BfsResult bfs(const ir::TransitionSystem& ts, const std::string& ok) {
  Stepper step(ts, ok);
  BfsResult res;
  std::map<StateKey, unsigned> dist;
  std::deque<StateKey> queue;
  const StateKey init = step.initial();
  dist[init] = 0;
  queue.push_back(init);
  while (!queue.empty()) {
    StateKey k = queue.front();
    queue.pop_front();
    const unsigned d = dist[k];
    res.diameter = std::max(res.diameter, d);
    for (const auto& e : step.successors(k)) {
      if (!e.ok && !res.bad_distance) res.bad_distance = d;
      if (dist.emplace(e.next, d + 1).second) queue.push_back(e.next);
    }
  }
  for (const auto& [k, d] : dist) res.reachable.insert(k);
  return res;
}

// found[n]: some path s_0 .. s_{n+1} from an arbitrary state keeps ok on
// frames 0..n and can violate it on frame n+1 (pairwise distinct states when
// `unique`), i.e. the induction step at n is satisfiable.
inline std::vector<bool> step_witnesses(const ir::TransitionSystem& ts, const std::string& ok,
                                        unsigned max_n, bool unique) {
  Stepper step(ts, ok);
  const auto states = all_states(ts);
  std::map<StateKey, std::vector<Edge>> succ;
  for (const auto& s : states) succ[s] = step.successors(s);
  // bad[s]: some admitted input makes ok 0 in s.
  std::map<StateKey, bool> bad;
  for (const auto& [s, es] : succ) {
    bool b = false;
    for (const auto& e : es) b = b || !e.ok;
    bad[s] = b;
  }
  std::vector<bool> found(max_n + 1, false);
  // Depth-first over good paths, which is enough at the sizes used in tests.
  std::vector<StateKey> path;
  std::function<void(const StateKey&)> dfs = [&](const StateKey& s) {
    const unsigned len = static_cast<unsigned>(path.size());  // frames before s
    if (len >= 1 && bad[s]) found[len - 1] = true;
    if (len > max_n) return;
    path.push_back(s);
    std::set<StateKey> seen;
    for (const auto& e : succ[s]) {
      if (!e.ok || !seen.insert(e.next).second) continue;
      if (unique && (std::find(path.begin(), path.end(), e.next) != path.end())) continue;
      dfs(e.next);
    }
    path.pop_back();
  };
  for (const auto& s : states) dfs(s);
  return found;
}

// Smallest n at which the induction step (with distinct states) is
// unsatisfiable, from the longest good path into a state that can violate ok.
// Only defined when the states that can reach a violation form no cycle;
// returns nullopt otherwise.
inline std::optional<unsigned> induction_depth(const ir::TransitionSystem& ts, const std::string& ok) {
  Stepper step(ts, ok);
  const auto states = all_states(ts);
  std::map<StateKey, std::vector<StateKey>> good;  // good edges, deduplicated
  std::map<StateKey, bool> bad;
  for (const auto& s : states) {
    std::set<StateKey> next;
    bool b = false;
    for (const auto& e : step.successors(s)) {
      if (e.ok) next.insert(e.next);
      else b = true;
    }
    good[s].assign(next.begin(), next.end());
    bad[s] = b;
  }
  // longest[s]: most edges on a good path from s to a bad-capable state, -1 if none.
  std::map<StateKey, long> longest;
  std::map<StateKey, int> mark;  // 1 on stack, 2 done
  bool cyclic = false;
  std::function<long(const StateKey&)> visit = [&](const StateKey& s) -> long {
    if (mark[s] == 2) return longest[s];
    if (mark[s] == 1) {
      cyclic = true;
      return -1;
    }
    mark[s] = 1;
    long best = bad[s] ? 0 : -1;
    for (const auto& t : good[s]) {
      const long l = visit(t);
      if (l >= 0) best = std::max(best, l + 1);
    }
    mark[s] = 2;
    return longest[s] = best;
  };
  long lmax = -1;
  for (const auto& s : states) lmax = std::max(lmax, visit(s));
  // Cycles among states that never reach a violation are harmless; any other
  // cycle leaves an edge whose values do not strictly decrease.
  if (cyclic)
    for (const auto& s : states)
      for (const auto& t : good[s])
        if (longest[t] >= 0 && longest[s] <= longest[t]) return std::nullopt;
  return lmax <= 0 ? 0u : static_cast<unsigned>(lmax);
}

}  // namespace oracles
