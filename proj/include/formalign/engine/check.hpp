#pragma once

#include <optional>
#include <string>
#include <vector>

#include "formalign/engine/unroll.hpp"
#include "formalign/sat/solver.hpp"

namespace formalign::engine {

struct EngineOptions {
  std::uint64_t seed = 0;
  std::uint64_t conflict_budget = 1'000'000;
  bool unique = true;           // distinct-state strengthening in k-induction
  unsigned vacuity_depth = 20;  // minimum cover depth for the vacuity check
};

sat::SolverOptions solver_options(const EngineOptions& opt);

/// Outcome of one SAT query. `trace` is set when Sat: a CEX for base and
/// cover queries, a pseudo-trace for induction steps.
struct QueryResult {
  sat::Status status = sat::Status::Unknown;
  std::optional<ir::Trace> trace;
  sat::SolverStats stats;

  bool sat() const { return status == sat::Status::Sat; }
  bool unsat() const { return status == sat::Status::Unsat; }
};

/// A query before solving: the unrolled graph and the nodes asserted true.
struct Query {
  UnrollContext ctx;
  std::vector<ir::Node> required;
  unsigned cycles = 0;  // frames decoded into the trace
};

QueryResult solve_query(Query& q, const EngineOptions& opt = {});

// The `ts` arguments below must hold 1-bit signal `ok` and no analog ports.

/// I_0 & (P_0 & T_0) & ... & (P_{n-1} & T_{n-1}) & !P_n, assumptions in every
/// frame. Sat gives a trace of n+1 cycles whose last cycle violates P.
QueryResult bmc_base(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                     const EngineOptions& opt = {});
Query base_query(const ir::TransitionSystem& ts, const std::string& ok, unsigned n);

/// (P_0 & T_0) & ... & (P_n & T_n) & !P_{n+1} from an unconstrained frame 0;
/// with `unique` the register states of frames 0..n+1 are pairwise distinct.
QueryResult induction_step(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                           bool unique, const EngineOptions& opt = {});
Query step_query(const ir::TransitionSystem& ts, const std::string& ok, unsigned n, bool unique);

/// I_0 & (!P_0 | ... | !P_n): some violation within n steps.
QueryResult bmc_within(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                       const EngineOptions& opt = {});

/// I_0 & (S_0 | ... | S_n): `signal` reachable within n steps.
QueryResult cover(const ir::TransitionSystem& ts, const std::string& signal, unsigned n,
                  const EngineOptions& opt = {});

enum class Verdict { Proven, Falsified, Unknown, Bounded };

const char* verdict_name(Verdict v);

struct CheckResult {
  Verdict verdict = Verdict::Unknown;
  // Proven: induction depth k. Falsified: last frame of the CEX. Bounded: the
  // depth checked without violation. Unknown: the depth reached.
  unsigned depth = 0;
  std::optional<ir::Trace> trace;
  bool vacuous = false;
  sat::SolverStats stats;
  std::string note;
};

/// For k = 0..k_max: base(k) Sat -> Falsified; step(k) Unsat -> Proven(k).
CheckResult k_induction(const ir::TransitionSystem& ts, const std::string& ok, unsigned k_max,
                        const EngineOptions& opt = {});

/// Minimal-depth falsification within `depth` steps, else Bounded(depth).
CheckResult bmc(const ir::TransitionSystem& ts, const std::string& ok, unsigned depth,
                const EngineOptions& opt = {});

void accumulate(sat::SolverStats& into, const sat::SolverStats& s);

}  // namespace formalign::engine
