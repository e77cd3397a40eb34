#include "formalign/sat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

namespace formalign::sat {

const char* status_name(Status s) {
  switch (s) {
    case Status::Sat: return "SAT";
    case Status::Unsat: return "UNSAT";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

// Finite subsequences of the Luby restart sequence: 1 1 2 1 1 2 4 ...
double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

Solver::Solver(SolverOptions opt) : opt_(opt), rng_(opt.seed) {}

int Solver::new_var() {
  const auto v = static_cast<std::uint32_t>(assigns_.size());
  assigns_.push_back(kUndef);
  levels_.push_back(0);
  reasons_.push_back(kNoReason);
  phase_.push_back(1);
  // A nonzero seed perturbs the initial order; zero keeps index order.
  activity_.push_back(opt_.seed ? static_cast<double>(rng_() % 1024) * 1e-6 : 0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  heap_insert(v);
  return static_cast<int>(v) + 1;
}

Solver::CRef Solver::alloc(const std::vector<Lit>& lits, bool learnt) {
  const auto c = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(lits.size()) << 2 | (learnt ? 2u : 0u));
  arena_.push_back(0);
  set_cact(c, 0.0f);
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  return c;
}

void Solver::attach(CRef c) {
  Lit* l = clits(c);
  watches_[neg(l[0])].push_back({c, l[1]});
  watches_[neg(l[1])].push_back({c, l[0]});
}

void Solver::add_clause(const std::vector<int>& clause) {
  if (solved_) throw std::logic_error("Solver is single use");
  original_.push_back(clause);
  for (int d : clause) {
    if (d == 0) throw std::invalid_argument("zero literal in clause");
    while (std::abs(d) > num_vars()) new_var();
  }
  if (unsat_) return;
  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (int d : clause) lits.push_back(to_lit(d));
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i])) return;  // tautology
    const auto v = value(lits[i]);
    if (v == kTrue) return;
    if (v == kUndef) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
  } else if (kept.size() == 1) {
    enqueue(kept[0], kNoReason);
    if (propagate() != kNoReason) unsat_ = true;
  } else {
    const CRef c = alloc(kept, false);
    clauses_.push_back(c);
    attach(c);
  }
}

void Solver::add_cnf(const Cnf& cnf) {
  while (num_vars() < cnf.num_vars) new_var();
  for (const auto& c : cnf.clauses) add_clause(c);
}

void Solver::enqueue(Lit l, CRef reason) {
  const auto v = var(l);
  assigns_[v] = (l & 1u) ? kFalse : kTrue;
  levels_[v] = level();
  reasons_[v] = reason;
  trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
  CRef confl = kNoReason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++];
    const Lit false_lit = neg(p);
    auto& ws = watches_[p];
    std::size_t i = 0, j = 0;
    const std::size_t n = ws.size();
    ++stats_.propagations;
    while (i < n) {
      const Watcher w = ws[i++];
      if (value(w.blocker) == kTrue) {
        ws[j++] = w;
        continue;
      }
      Lit* c = clits(w.cref);
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      const Lit first = c[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      const std::uint32_t sz = csize(w.cref);
      bool moved = false;
      for (std::uint32_t k = 2; k < sz; ++k) {
        if (value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[neg(c[1])].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoReason) break;
  }
  return confl;
}

void Solver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(CRef c) {
  set_cact(c, cact(c) + static_cast<float>(cla_inc_));
  if (cact(c) > 1e20f) {
    for (CRef l : learnts_) set_cact(l, cact(l) * 1e-20f);
    cla_inc_ *= 1e-20;
  }
}

bool Solver::redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  const std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    const CRef c = reasons_[var(analyze_stack_.back())];
    analyze_stack_.pop_back();
    Lit* lits = clits(c);
    const std::uint32_t sz = csize(c);
    for (std::uint32_t i = 1; i < sz; ++i) {
      const Lit q = lits[i];
      const auto v = var(q);
      if (seen_[v] || levels_[v] == 0) continue;
      if (reasons_[v] != kNoReason && ((1u << (levels_[v] & 31)) & abstract_levels) != 0) {
        seen_[v] = 1;
        analyze_stack_.push_back(q);
        analyze_clear_.push_back(q);
      } else {
        for (std::size_t k = top; k < analyze_clear_.size(); ++k) seen_[var(analyze_clear_[k])] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze(CRef confl, std::vector<Lit>& learnt, unsigned& bt_level) {
  learnt.clear();
  learnt.push_back(0);  // slot for the asserting literal
  int path = 0;
  bool have_p = false;
  Lit p = 0;
  std::size_t idx = trail_.size();
  do {
    if (clearnt(confl)) bump_clause(confl);
    Lit* c = clits(confl);
    const std::uint32_t sz = csize(confl);
    for (std::uint32_t j = have_p ? 1 : 0; j < sz; ++j) {
      const Lit q = c[j];
      const auto v = var(q);
      if (seen_[v] || levels_[v] == 0) continue;
      bump_var(v);
      seen_[v] = 1;
      if (levels_[v] >= level())
        ++path;
      else
        learnt.push_back(q);
    }
    while (!seen_[var(trail_[idx - 1])]) --idx;
    p = trail_[--idx];
    have_p = true;
    confl = reasons_[var(p)];
    seen_[var(p)] = 0;
    --path;
  } while (path > 0);
  learnt[0] = neg(p);

  // Recursive minimization: drop literals implied by the rest.
  analyze_clear_.assign(learnt.begin(), learnt.end());
  std::uint32_t abstract_levels = 0;
  for (std::size_t i = 1; i < learnt.size(); ++i) abstract_levels |= 1u << (levels_[var(learnt[i])] & 31);
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (reasons_[var(learnt[i])] == kNoReason || !redundant(learnt[i], abstract_levels))
      learnt[keep++] = learnt[i];
  }
  learnt.resize(keep);

  if (learnt.size() == 1) {
    bt_level = 0;
  } else {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i)
      if (levels_[var(learnt[i])] > levels_[var(learnt[max_i])]) max_i = i;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = levels_[var(learnt[1])];
  }
  for (Lit l : analyze_clear_) seen_[var(l)] = 0;
}

void Solver::backtrack(unsigned lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i > trail_lim_[lvl]; --i) {
    const Lit l = trail_[i - 1];
    const auto v = var(l);
    assigns_[v] = kUndef;
    reasons_[v] = kNoReason;
    phase_[v] = static_cast<std::uint8_t>(l & 1u);
    heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  qhead_ = trail_.size();
  trail_lim_.resize(lvl);
}

Solver::Lit Solver::pick_branch() {
  while (!heap_.empty()) {
    const auto v = heap_pop();
    if (assigns_[v] == kUndef) return 2 * v + phase_[v];
  }
  return 0xFFFFFFFFu;
}

bool Solver::locked(CRef c) {
  const Lit l0 = clits(c)[0];
  return reasons_[var(l0)] == c && value(l0) == kTrue;
}

void Solver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](CRef a, CRef b) {
    const bool bin_a = csize(a) == 2, bin_b = csize(b) == 2;
    if (bin_a != bin_b) return bin_b;
    if (cact(a) != cact(b)) return cact(a) < cact(b);
    return a < b;
  });
  const std::size_t half = learnts_.size() / 2;
  std::size_t j = 0;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    const CRef c = learnts_[i];
    if (i < half && csize(c) > 2 && !locked(c)) {
      arena_[c] |= 1u;
      wasted_ += csize(c) + 2;
      ++stats_.removed;
    } else {
      learnts_[j++] = c;
    }
  }
  learnts_.resize(j);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return cdeleted(w.cref); }),
             ws.end());
  if (wasted_ * 2 > arena_.size()) collect_garbage();
}

void Solver::collect_garbage() {
  std::vector<std::uint32_t> fresh;
  fresh.reserve(arena_.size() - wasted_);
  std::unordered_map<CRef, CRef> moved;
  auto relocate = [&](CRef c) {
    const auto n = static_cast<CRef>(fresh.size());
    fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + 2 + csize(c));
    moved.emplace(c, n);
    return n;
  };
  for (auto& c : clauses_) c = relocate(c);
  for (auto& c : learnts_) c = relocate(c);
  for (Lit l : trail_) {
    auto& r = reasons_[var(l)];
    if (r != kNoReason) {
      auto it = moved.find(r);
      r = it == moved.end() ? kNoReason : it->second;
    }
  }
  arena_.swap(fresh);
  wasted_ = 0;
  for (auto& ws : watches_) ws.clear();
  for (CRef c : clauses_) attach(c);
  for (CRef c : learnts_) attach(c);
}

SatResult Solver::solve() {
  if (solved_) throw std::logic_error("Solver is single use");
  solved_ = true;
  SatResult res;
  auto finish = [&](Status s) {
    res.status = s;
    res.stats = stats_;
    return res;
  };
  if (unsat_ || propagate() != kNoReason) return finish(Status::Unsat);
  max_learnts_ = std::max<double>(2000.0, static_cast<double>(clauses_.size()) / 3.0);

  std::vector<Lit> learnt;
  for (std::uint64_t round = 0;; ++round) {
    const auto budget = static_cast<std::uint64_t>(luby(2.0, round) * opt_.restart_unit);
    std::uint64_t here = 0;
    for (;;) {
      const CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats_.conflicts;
        ++here;
        if (level() == 0) return finish(Status::Unsat);
        unsigned bt = 0;
        analyze(confl, learnt, bt);
        backtrack(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          const CRef c = alloc(learnt, true);
          learnts_.push_back(c);
          attach(c);
          bump_clause(c);
          enqueue(learnt[0], c);
        }
        ++stats_.learned;
        var_inc_ /= opt_.var_decay;
        cla_inc_ /= opt_.clause_decay;
        if (stats_.conflicts >= opt_.conflict_budget) return finish(Status::Unknown);
        continue;
      }
      if (here >= budget) {
        backtrack(0);
        ++stats_.restarts;
        max_learnts_ *= 1.05;
        break;
      }
      if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
        reduce_db();
      const Lit next = pick_branch();
      if (next == 0xFFFFFFFFu) {
        res.model.assign(assigns_.size() + 1, false);
        for (std::size_t v = 0; v < assigns_.size(); ++v) res.model[v + 1] = assigns_[v] == kTrue;
        for (const auto& c : original_) {
          bool ok = false;
          for (int d : c) ok = ok || res.value(d);
          if (!ok) throw std::logic_error("SAT model fails an input clause");
        }
        return finish(Status::Sat);
      }
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(next, kNoReason);
    }
  }
}

void Solver::heap_insert(std::uint32_t v) {
  if (heap_pos_[v] >= 0) return;
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
  const auto v = heap_[i];
  while (i > 0) {
    const std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

void Solver::heap_down(std::size_t i) {
  const auto v = heap_[i];
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= n) break;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<std::int64_t>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<std::int64_t>(i);
}

std::uint32_t Solver::heap_pop() {
  const auto top = heap_[0];
  heap_pos_[top] = -1;
  const auto last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

SatResult solve(const Cnf& cnf, const SolverOptions& opt) {
  Solver s(opt);
  s.add_cnf(cnf);
  return s.solve();
}

}  // namespace formalign::sat
