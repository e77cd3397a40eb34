#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <vector>

#include "formalign/sat/cnf.hpp"

namespace formalign::sat {

enum class Status { Sat, Unsat, Unknown };

const char* status_name(Status s);

struct SolverOptions {
  std::uint64_t seed = 0;
  std::uint64_t conflict_budget = 1'000'000;
  double var_decay = 0.95;
  double clause_decay = 0.999;
  unsigned restart_unit = 100;
};

struct SolverStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learned = 0;
  std::uint64_t removed = 0;
};

struct SatResult {
  Status status = Status::Unknown;
  std::vector<bool> model;  // by variable, entry 0 unused; filled when Sat
  SolverStats stats;

  bool sat() const { return status == Status::Sat; }
  bool unsat() const { return status == Status::Unsat; }
  bool value(int lit) const {
    const bool v = model.at(static_cast<std::size_t>(lit < 0 ? -lit : lit));
    return lit < 0 ? !v : v;
  }
};

/// CDCL solver: two watched literals with blockers, VSIDS, first-UIP learning
/// with recursive minimization, Luby restarts, phase saving and activity-based
/// learned-clause deletion. Single use: add clauses, then solve() once.
class Solver {
 public:
  explicit Solver(SolverOptions opt = {});

  int new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }
  void add_clause(const std::vector<int>& clause);
  void add_cnf(const Cnf& cnf);

  SatResult solve();

 private:
  using Lit = std::uint32_t;  // 2*var + negated
  using CRef = std::uint32_t;
  static constexpr CRef kNoReason = 0xFFFFFFFFu;
  static constexpr std::int8_t kUndef = 0, kTrue = 1, kFalse = -1;

  struct Watcher {
    CRef cref;
    Lit blocker;
  };

  static Lit to_lit(int dimacs) {
    return dimacs > 0 ? static_cast<Lit>(2 * (dimacs - 1)) : static_cast<Lit>(2 * (-dimacs - 1) + 1);
  }
  static std::uint32_t var(Lit l) { return l >> 1; }
  static Lit neg(Lit l) { return l ^ 1u; }

  std::int8_t value(Lit l) const {
    const std::int8_t v = assigns_[var(l)];
    return (l & 1u) ? static_cast<std::int8_t>(-v) : v;
  }

  // Clause arena: [size<<2 | learnt<<1 | deleted][activity bits][lits...].
  std::uint32_t csize(CRef c) const { return arena_[c] >> 2; }
  bool clearnt(CRef c) const { return (arena_[c] >> 1) & 1u; }
  bool cdeleted(CRef c) const { return arena_[c] & 1u; }
  Lit* clits(CRef c) { return &arena_[c + 2]; }
  float cact(CRef c) const { return std::bit_cast<float>(arena_[c + 1]); }
  void set_cact(CRef c, float a) { arena_[c + 1] = std::bit_cast<std::uint32_t>(a); }
  CRef alloc(const std::vector<Lit>& lits, bool learnt);

  void attach(CRef c);
  void enqueue(Lit l, CRef reason);
  CRef propagate();
  void analyze(CRef confl, std::vector<Lit>& learnt, unsigned& bt_level);
  bool redundant(Lit l, std::uint32_t abstract_levels);
  void backtrack(unsigned level);
  Lit pick_branch();
  void bump_var(std::uint32_t v);
  void bump_clause(CRef c);
  void reduce_db();
  void collect_garbage();
  bool locked(CRef c);
  unsigned level() const { return static_cast<unsigned>(trail_lim_.size()); }

  // Activity-ordered binary heap over variables.
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  std::uint32_t heap_pop();
  bool heap_less(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  SolverOptions opt_;
  std::mt19937_64 rng_;
  bool unsat_ = false;
  bool solved_ = false;

  std::vector<std::uint32_t> arena_;
  std::size_t wasted_ = 0;
  std::vector<CRef> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal

  std::vector<std::int8_t> assigns_;
  std::vector<std::uint32_t> levels_;
  std::vector<CRef> reasons_;
  std::vector<std::uint8_t> phase_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<std::uint32_t> heap_;
  std::vector<std::int64_t> heap_pos_;  // -1 when absent

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;

  std::vector<std::vector<int>> original_;  // for the model self-check
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_clear_;
  SolverStats stats_;
};

/// One-shot convenience wrapper.
SatResult solve(const Cnf& cnf, const SolverOptions& opt = {});

}  // namespace formalign::sat
