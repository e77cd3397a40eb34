#include "formalign/engine/check.hpp"

#include <stdexcept>

#include "formalign/sat/tseitin.hpp"

namespace formalign::engine {

sat::SolverOptions solver_options(const EngineOptions& opt) {
  sat::SolverOptions s;
  s.seed = opt.seed;
  s.conflict_budget = opt.conflict_budget;
  return s;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proven: return "proven";
    case Verdict::Falsified: return "falsified";
    case Verdict::Unknown: return "unknown";
    case Verdict::Bounded: return "bounded";
  }
  return "?";
}

void accumulate(sat::SolverStats& into, const sat::SolverStats& s) {
  into.conflicts += s.conflicts;
  into.decisions += s.decisions;
  into.propagations += s.propagations;
  into.restarts += s.restarts;
  into.learned += s.learned;
  into.removed += s.removed;
}

QueryResult solve_query(Query& q, const EngineOptions& opt) {
  sat::Cnf cnf;
  sat::TseitinEncoder enc(q.ctx.graph(), cnf);
  for (ir::Node n : q.required) enc.require(n);
  QueryResult res;
  auto r = sat::solve(cnf, solver_options(opt));
  res.status = r.status;
  res.stats = r.stats;
  if (r.sat()) {
    res.trace = q.ctx.extract_trace(
        [&](ir::Node n) { return enc.encoded(n) && r.value(enc.lit(n)); }, q.cycles);
  }
  return res;
}

namespace {

// P on frames 0..n-1, assumptions on frames 0..n.
void path(Query& q, const std::string& ok, unsigned n) {
  for (unsigned i = 0; i < n; ++i) q.required.push_back(q.ctx.bit(i, ok));
  for (unsigned i = 0; i <= n; ++i) q.required.push_back(q.ctx.assumptions(i));
}

}  // namespace

Query base_query(const ir::TransitionSystem& ts, const std::string& ok, unsigned n) {
  Query q{UnrollContext(ts, true), {}, n + 1};
  path(q, ok, n);
  q.required.push_back(q.ctx.graph().lnot(q.ctx.bit(n, ok)));
  return q;
}

Query step_query(const ir::TransitionSystem& ts, const std::string& ok, unsigned n, bool unique) {
  Query q{UnrollContext(ts, false), {}, n + 2};
  path(q, ok, n + 1);
  q.required.push_back(q.ctx.graph().lnot(q.ctx.bit(n + 1, ok)));
  if (unique)
    for (unsigned i = 0; i <= n + 1; ++i)
      for (unsigned j = i + 1; j <= n + 1; ++j) q.required.push_back(q.ctx.states_differ(i, j));
  return q;
}

QueryResult bmc_base(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                     const EngineOptions& opt) {
  auto q = base_query(ts, ok, n);
  return solve_query(q, opt);
}

QueryResult induction_step(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                           bool unique, const EngineOptions& opt) {
  auto q = step_query(ts, ok, n, unique);
  return solve_query(q, opt);
}

namespace {

QueryResult reach_within(const ir::TransitionSystem& ts, const std::string& sig, bool negate,
                         unsigned n, const EngineOptions& opt) {
  Query q{UnrollContext(ts, true), {}, n + 1};
  auto& g = q.ctx.graph();
  ir::Node any = ir::GateGraph::kFalse;
  for (unsigned i = 0; i <= n; ++i) {
    q.required.push_back(q.ctx.assumptions(i));
    const ir::Node s = q.ctx.bit(i, sig);
    any = g.lor(any, negate ? g.lnot(s) : s);
  }
  q.required.push_back(any);
  return solve_query(q, opt);
}

}  // namespace

QueryResult bmc_within(const ir::TransitionSystem& ts, const std::string& ok, unsigned n,
                       const EngineOptions& opt) {
  return reach_within(ts, ok, true, n, opt);
}

QueryResult cover(const ir::TransitionSystem& ts, const std::string& signal, unsigned n,
                  const EngineOptions& opt) {
  return reach_within(ts, signal, false, n, opt);
}

CheckResult k_induction(const ir::TransitionSystem& ts, const std::string& ok, unsigned k_max,
                        const EngineOptions& opt) {
  CheckResult res;
  for (unsigned k = 0; k <= k_max; ++k) {
    res.depth = k;
    auto base = bmc_base(ts, ok, k, opt);
    accumulate(res.stats, base.stats);
    if (base.sat()) {
      res.verdict = Verdict::Falsified;
      res.trace = std::move(base.trace);
      return res;
    }
    if (base.status == sat::Status::Unknown) {
      res.verdict = Verdict::Unknown;
      res.note = "solver budget exhausted in base case";
      return res;
    }
    auto step = induction_step(ts, ok, k, opt.unique, opt);
    accumulate(res.stats, step.stats);
    if (step.unsat()) {
      res.verdict = Verdict::Proven;
      return res;
    }
    if (step.status == sat::Status::Unknown) {
      res.verdict = Verdict::Unknown;
      res.note = "solver budget exhausted in induction step";
      return res;
    }
  }
  res.verdict = Verdict::Unknown;
  res.note = "induction step not closed";
  return res;
}

CheckResult bmc(const ir::TransitionSystem& ts, const std::string& ok, unsigned depth,
                const EngineOptions& opt) {
  CheckResult res;
  res.depth = depth;
  auto all = bmc_within(ts, ok, depth, opt);
  accumulate(res.stats, all.stats);
  if (all.status == sat::Status::Unknown) {
    res.verdict = Verdict::Unknown;
    res.note = "solver budget exhausted";
    return res;
  }
  if (all.unsat()) {
    res.verdict = Verdict::Bounded;
    return res;
  }
  // "Violation within n" is monotone in n: bisect for the first failing frame.
  // The satisfying trace bounds the search from above.
  unsigned hi = depth;
  for (unsigned i = 0; i < all.trace->size(); ++i)
    if (ir::lookup(all.trace->cycles[i], ok) == 0u) {
      hi = i;
      break;
    }
  unsigned lo = 0;
  while (lo < hi) {
    const unsigned mid = lo + (hi - lo) / 2;
    auto q = bmc_within(ts, ok, mid, opt);
    accumulate(res.stats, q.stats);
    if (q.status == sat::Status::Unknown) {
      res.verdict = Verdict::Unknown;
      res.note = "solver budget exhausted";
      return res;
    }
    if (q.sat()) hi = mid;
    else lo = mid + 1;
  }
  auto base = bmc_base(ts, ok, hi, opt);
  accumulate(res.stats, base.stats);
  if (base.status == sat::Status::Unknown) {
    res.verdict = Verdict::Unknown;
    res.note = "solver budget exhausted";
    return res;
  }
  if (!base.sat()) throw std::logic_error("bmc: first violation at frame " + std::to_string(hi) + " not reproducible");
  res.verdict = Verdict::Falsified;
  res.depth = hi;
  res.trace = std::move(base.trace);
  return res;
}

}  // namespace formalign::engine
