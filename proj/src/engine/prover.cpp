#include "formalign/engine/prover.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "formalign/engine/coi.hpp"
#include "formalign/ir/lowering.hpp"
#include "formalign/props/monitor.hpp"

namespace formalign::engine {

LemmaPlan parse_lemma_plan(std::string_view text) {
  LemmaPlan plan;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const bool has_uses = line.find(':') != std::string::npos;
    std::replace(line.begin(), line.end(), ':', ' ');
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    LemmaPlan::Entry e;
    e.line = lineno;
    if (kind == "lemma") e.lemma = true;
    else if (kind != "target")
      throw PlanError("line " + std::to_string(lineno) + ": expected 'lemma' or 'target', got '" +
                      kind + "'");
    if (!(ls >> e.name))
      throw PlanError("line " + std::to_string(lineno) + ": missing property name");
    std::string dep;
    while (ls >> dep) e.uses.push_back(dep);
    e.explicit_uses = has_uses;
    plan.entries.push_back(std::move(e));
  }
  return plan;
}

std::vector<LemmaPlan::Entry> schedule(const LemmaPlan& plan) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    if (!index.emplace(e.name, i).second)
      throw PlanError("line " + std::to_string(e.line) + ": '" + e.name + "' listed twice");
  }
  std::vector<std::vector<std::size_t>> users(plan.entries.size());
  std::vector<std::size_t> pending(plan.entries.size(), 0);
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    for (const auto& u : e.uses) {
      auto it = index.find(u);
      if (it == index.end())
        throw PlanError("line " + std::to_string(e.line) + ": '" + e.name + "' uses unknown lemma '" + u + "'");
      if (!plan.entries[it->second].lemma)
        throw PlanError("line " + std::to_string(e.line) + ": '" + e.name + "' uses target '" + u +
                        "'; only lemmas may be assumed");
      users[it->second].push_back(i);
      ++pending[i];
    }
  }
  // Kahn's algorithm, always taking the earliest ready entry.
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < pending.size(); ++i)
    if (pending[i] == 0) ready.insert(i);
  std::vector<LemmaPlan::Entry> order;
  while (!ready.empty()) {
    const std::size_t i = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(plan.entries[i]);
    for (std::size_t u : users[i])
      if (--pending[u] == 0) ready.insert(u);
  }
  if (order.size() != plan.entries.size()) {
    std::string names;
    for (std::size_t i = 0; i < pending.size(); ++i)
      if (pending[i]) names += (names.empty() ? "" : ", ") + plan.entries[i].name;
    throw PlanError("cyclic lemma plan: " + names);
  }
  return order;
}

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

PreparedCheck prepare_check(const ir::TransitionSystem& design, const props::PropFile& file,
                            const props::Property& p,
                            const std::vector<const props::Property*>& lemmas) {
  PreparedCheck pc;
  auto mon = props::compile_monitor(props::bind_props(design, file), p);
  pc.full = std::move(mon.ts);
  pc.ok = mon.ok;
  pc.match = mon.match;
  for (const auto* l : lemmas) {
    auto lm = props::compile_monitor(pc.full, *l);
    pc.full = std::move(lm.ts);
    pc.full.add_assumption("lemma_" + l->name, ir::var(lm.ok, 1));
  }
  pc.full = ir::lower_analog_ports(pc.full);
  std::vector<std::string> roots{pc.ok};
  if (!pc.match.empty()) roots.push_back(pc.match);
  pc.reduced = cone_of_influence(pc.full, roots);
  return pc;
}

PropertyResult check_property(const ir::TransitionSystem& design, const props::PropFile& file,
                              const props::Property& p, const CheckConfig& cfg,
                              const std::vector<const props::Property*>& lemmas) {
  const auto t0 = std::chrono::steady_clock::now();
  PropertyResult out;
  out.name = p.name;
  for (const auto* l : lemmas) out.assumed.push_back(l->name);

  const PreparedCheck pc = prepare_check(design, file, p, lemmas);
  const ir::TransitionSystem& reduced = pc.reduced;
  const ir::TransitionSystem& full = pc.full;

  CheckResult& res = out.result;
  if (cfg.engine == EngineKind::KInduction) {
    res = k_induction(reduced, pc.ok, cfg.kmax, cfg.engine_opt);
    if (res.verdict == Verdict::Unknown && res.note == "induction step not closed" &&
        cfg.bmc_depth > cfg.kmax) {
      auto stats = res.stats;
      res = bmc(reduced, pc.ok, cfg.bmc_depth, cfg.engine_opt);
      accumulate(res.stats, stats);
      if (res.verdict == Verdict::Bounded)
        res.note = "induction open up to k=" + std::to_string(cfg.kmax);
    }
  } else {
    res = bmc(reduced, pc.ok, cfg.bmc_depth, cfg.engine_opt);
  }

  if (res.trace) {
    std::vector<ir::Valuation> stim;
    for (const auto& c : res.trace->cycles) stim.push_back(c.inputs);
    auto whole = ir::simulate(full, stim);
    if (ir::lookup(whole.cycles.back(), pc.ok) != 0u)
      throw std::logic_error("counterexample for '" + p.name + "' does not fail on replay");
    res.trace = std::move(whole);
  }

  if (!pc.match.empty() && (res.verdict == Verdict::Proven || res.verdict == Verdict::Bounded)) {
    const unsigned depth = std::max(res.depth, cfg.engine_opt.vacuity_depth);
    auto c = cover(reduced, pc.match, depth, cfg.engine_opt);
    accumulate(res.stats, c.stats);
    res.vacuous = c.unsat();
  }
  out.time_ms = elapsed_ms(t0);
  return out;
}

std::vector<PropertyResult> prove_with_lemmas(const ir::TransitionSystem& design,
                                              const props::PropFile& file, const LemmaPlan& plan,
                                              const CheckConfig& cfg) {
  const auto order = schedule(plan);
  for (const auto& e : order)
    if (!file.find(e.name))
      throw PlanError("line " + std::to_string(e.line) + ": no property named '" + e.name + "'");

  std::vector<PropertyResult> results;
  std::vector<std::string> proven;
  for (const auto& e : order) {
    std::vector<const props::Property*> assume;
    std::string skipped;
    const auto& candidates = e.explicit_uses ? e.uses : proven;
    for (const auto& name : candidates) {
      if (std::find(proven.begin(), proven.end(), name) != proven.end()) assume.push_back(file.find(name));
      else skipped += (skipped.empty() ? "" : ", ") + name;
    }
    auto r = check_property(design, file, *file.find(e.name), cfg, assume);
    if (!skipped.empty()) {
      if (!r.result.note.empty()) r.result.note += "; ";
      r.result.note += "not assumed (unproven): " + skipped;
    }
    if (e.lemma && r.result.verdict == Verdict::Proven) proven.push_back(e.name);
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<PropertyResult> check_properties(const ir::TransitionSystem& design,
                                             const props::PropFile& file, const CheckConfig& cfg,
                                             const LemmaPlan* plan) {
  std::vector<PropertyResult> results(file.props.size());
  std::vector<bool> done(file.props.size(), false);
  auto slot = [&](const std::string& name) {
    for (std::size_t i = 0; i < file.props.size(); ++i)
      if (file.props[i].name == name) return i;
    throw PlanError("no property named '" + name + "'");
  };
  if (plan) {
    for (auto& r : prove_with_lemmas(design, file, *plan, cfg)) {
      const std::size_t i = slot(r.name);
      done[i] = true;
      results[i] = std::move(r);
    }
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < file.props.size(); ++i)
    if (!done[i]) todo.push_back(i);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < todo.size();) {
      try {
        results[todo[k]] = check_property(design, file, file.props[todo[k]], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(todo.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

std::string report_line(const PropertyResult& r, bool timing) {
  std::ostringstream os;
  os << r.name << ' ' << verdict_name(r.result.verdict) << ' ' << r.result.depth << ' ';
  if (timing) os << static_cast<long long>(r.time_ms + 0.5);
  else os << '-';
  os << ' ' << (r.result.vacuous ? "vacuous" : "-");
  return os.str();
}

std::string report_json(const PropertyResult& r, bool timing) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["verdict"] = verdict_name(r.result.verdict);
  j["depth"] = r.result.depth;
  if (timing) j["time_ms"] = static_cast<long long>(r.time_ms + 0.5);
  j["vacuous"] = r.result.vacuous;
  j["conflicts"] = r.result.stats.conflicts;
  j["decisions"] = r.result.stats.decisions;
  if (r.result.trace) j["cex_cycles"] = r.result.trace->size();
  if (!r.assumed.empty()) j["assumed"] = r.assumed;
  if (!r.result.note.empty()) j["note"] = r.result.note;
  return j.dump();
}

}  // namespace formalign::engine
