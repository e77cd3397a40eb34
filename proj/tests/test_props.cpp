#include <doctest.h>

#include <random>

#include "formalign/ir/interp.hpp"
#include "formalign/ir/parser.hpp"
#include "formalign/props/evaluator.hpp"
#include "formalign/props/monitor.hpp"
#include "formalign/props/parser.hpp"
#include "oracles/random_props.hpp"

using namespace formalign;
using namespace formalign::props;
using Verdict = EvalResult::Verdict;

namespace {

const char* kCounter = "reg c 2 init 0\nnext c (add c (const 2 1))\n";

ir::Trace run(const ir::TransitionSystem& ts, const std::vector<ir::Valuation>& in) {
  return ir::simulate(ts, in);
}

ir::Trace ab_trace(const std::vector<int>& a, const std::vector<int>& b) {
  ir::Trace tr;
  for (std::size_t t = 0; t < a.size(); ++t) {
    ir::Cycle c;
    c.inputs["a"] = static_cast<std::uint64_t>(a[t]);
    c.inputs["b"] = static_cast<std::uint64_t>(b[t]);
    tr.cycles.push_back(c);
  }
  return tr;
}

}  // namespace

TEST_CASE("non-overlapped implication parses") {
  auto f = parse_props("prop p1: start |=> busy ;");
  REQUIRE(f.props.size() == 1);
  const auto& p = f.props[0];
  CHECK(p.kind == Property::Kind::NonOverlapped);
  CHECK(p.antecedent.length() == 0);
  CHECK(p.consequent_start() == 1);
}

TEST_CASE("register write-read check parses to the expected shape") {
  auto f = parse_props(
      "prop rw: (wr && addr==3) ##1 (rd && addr==3 && !wr) |-> rdata == $past(wdata,1) ;");
  const auto& p = f.props.at(0);
  CHECK(p.kind == Property::Kind::Overlapped);
  REQUIRE(p.antecedent.items.size() == 2);
  CHECK(p.antecedent.items[1].delay == 1);
  CHECK(to_string(p.antecedent.items[0].expr) == "wr && addr == 3");
  CHECK(to_string(p.antecedent.items[1].expr) == "rd && addr == 3 && !wr");
  CHECK(to_string(p.consequent.items[0].expr) == "rdata == $past(wdata, 1)");
}

TEST_CASE("missing consequent is a syntax error") {
  try {
    parse_props("prop bad: x |->");
    FAIL("expected a parse error");
  } catch (const PropError& e) {
    REQUIRE(e.diagnostics().size() == 1);
    CHECK(e.diagnostics()[0].line == 1);
    CHECK(e.diagnostics()[0].col == 16);
    CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
  }
}

TEST_CASE("parser reports every bad statement and unknown constructs") {
  try {
    parse_props("prop a: x |-> ;\nprop b: y ;\nprop c: $rose(y) ;\nprop d: z ##1 w ;\n");
    FAIL("expected errors");
  } catch (const PropError& e) {
    CHECK(e.diagnostics().size() == 3);
    CHECK(e.diagnostics()[1].line == 3);
  }
  CHECK_THROWS_AS(parse_props("prop a: x ; prop a: y ;"), PropError);
  CHECK_THROWS_AS(parse_props("prop a: ##1 x |-> y ;"), PropError);
  CHECK_THROWS_AS(parse_props("prop a: $past(x, 0) ;"), PropError);
  CHECK_THROWS_AS(parse_props("cover a: x ;"), PropError);
}

TEST_CASE("comments, findings, flags and assumptions") {
  auto f = parse_props(R"(
# plain comment
// another
# FINDING conn_3: width mismatch 8 -> 4
flag seen : wr && addr == 0x2 ;
assume quiet : !en ;
prop p : !seen || ok ;
)");
  CHECK(f.flags.size() == 1);
  CHECK(f.assumes.size() == 1);
  CHECK(f.props.size() == 1);
  REQUIRE(f.findings.size() == 1);
  CHECK(f.findings[0].name == "conn_3");
  CHECK(f.findings[0].message == "width mismatch 8 -> 4");
}

TEST_CASE("print then parse is lossless") {
  std::mt19937_64 rng(8);
  oracles::PropGen g{rng, {{"a", 1}, {"b", 1}, {"x", 3}}};
  PropFile f;
  for (int i = 0; i < 300; ++i) f.props.push_back(g.property("p" + std::to_string(i)));
  f.flags.push_back({"fl", g.expr(2)});
  f.assumes.push_back({"as", g.expr(2)});
  f.findings.push_back({"w", "width mismatch"});
  const std::string text = print_props(f);
  auto back = parse_props(text);
  REQUIRE(back.props.size() == f.props.size());
  for (std::size_t i = 0; i < f.props.size(); ++i) {
    const auto& p = f.props[i];
    const auto& q = back.props[i];
    CHECK(p.kind == q.kind);
    if (p.kind == Property::Kind::Invariant) {
      CHECK(same(p.invariant, q.invariant));
      continue;
    }
    for (auto [s, t] : {std::pair{&p.antecedent, &q.antecedent}, std::pair{&p.consequent, &q.consequent}}) {
      REQUIRE(s->items.size() == t->items.size());
      for (std::size_t k = 0; k < s->items.size(); ++k) {
        CHECK(s->items[k].delay == t->items[k].delay);
        CHECK(same(s->items[k].expr, t->items[k].expr));
      }
    }
  }
  CHECK(print_props(back) == text);
}

TEST_CASE("invariant c != 3 on the counter fails first at cycle 3") {
  auto ts = ir::parse_ir_or_throw(kCounter);
  auto p = parse_props("prop p : c != 3 ;").props[0];
  auto m = compile_monitor(ts, p);
  auto tr = run(m.ts, std::vector<ir::Valuation>(6));
  for (std::size_t t = 0; t < 6; ++t) CHECK(tr.cycles[t].wires.at(m.ok) == (t < 3 ? 1u : 0u));
  auto ev = eval_property_on_trace(p, run(ts, std::vector<ir::Valuation>(6)));
  CHECK(ev.verdict == Verdict::Fail);
  CHECK(ev.fail_cycle == 3);
}

TEST_CASE("a |-> ##1 b fails from the cycle after a, and stays failed") {
  auto ts = ir::parse_ir_or_throw("input a 1\ninput b 1\n");
  auto p = parse_props("prop p : a |-> ##1 b ;").props[0];
  auto m = compile_monitor(ts, p);
  auto tr = ab_trace({0, 0, 1, 0, 0, 1, 1}, {1, 1, 1, 0, 1, 1, 1});
  std::vector<ir::Valuation> stim;
  for (const auto& c : tr.cycles) stim.push_back(c.inputs);
  auto sim = run(m.ts, stim);
  for (std::size_t t = 0; t < sim.size(); ++t) CHECK(sim.cycles[t].wires.at(m.fail) == (t >= 3 ? 1u : 0u));
  auto ev = eval_property_on_trace(p, tr);
  CHECK(ev.verdict == Verdict::Fail);
  CHECK(ev.fail_cycle == 3);
}

TEST_CASE("evaluator: tautology passes, vacuity flagged, pending obligations") {
  auto taut = parse_props("prop p : a |-> a ;").props[0];
  auto r = eval_property_on_trace(taut, ab_trace({1, 0, 1}, {0, 0, 0}));
  CHECK(r.verdict == Verdict::Pass);
  CHECK_FALSE(r.vacuous);

  auto never = parse_props("prop p : a && b |-> 0 ;").props[0];
  r = eval_property_on_trace(never, ab_trace({1, 0, 1}, {0, 1, 0}));
  CHECK(r.verdict == Verdict::Pass);
  CHECK(r.vacuous);

  auto late = parse_props("prop p : a |=> ##2 b ;").props[0];
  r = eval_property_on_trace(late, ab_trace({0, 0, 1}, {0, 0, 0}));
  CHECK(r.verdict == Verdict::Pending);
  CHECK(r.matches == 1);

  CHECK_THROWS_AS(eval_property_on_trace(parse_props("prop p : zz ;").props[0], ab_trace({0}, {0})),
                  EvalError);
}

TEST_CASE("monitor compilation errors") {
  auto ts = ir::parse_ir_or_throw("input a 1\ninput x 4\n");
  CHECK_THROWS_AS(compile_monitor(ts, parse_props("prop p : q ;").props[0]), MonitorError);
  CHECK_THROWS_AS(compile_monitor(ts, parse_props("prop p : $past(a, 65) ;").props[0]), MonitorError);
  CHECK_NOTHROW(compile_monitor(ts, parse_props("prop p : $past(a, 64) ;").props[0]));
  CHECK_THROWS_AS(compile_monitor(ts, parse_props("prop p : x[4] ;").props[0]), MonitorError);
}

TEST_CASE("flags are sticky registered history") {
  auto ts = ir::parse_ir_or_throw("input a 1\ninput b 1\n");
  auto f = parse_props("flag seen : a ;\nprop p : b |-> !seen ;");
  auto bound = bind_props(ts, f);
  auto m = compile_monitor(bound, f.props[0]);
  auto tr = ab_trace({0, 1, 0, 0}, {1, 1, 0, 1});
  auto ev = eval_property_on_trace(f.props[0], tr, f.flags);
  CHECK(ev.verdict == Verdict::Fail);
  CHECK(ev.fail_cycle == 3);
  CHECK(oracles::monitor_fail_cycle(m, tr) == std::optional<std::size_t>(3));
}

TEST_CASE("monitor verdicts equal evaluator verdicts on random properties and traces") {
  auto ts = ir::parse_ir_or_throw("input a 1\ninput b 1\ninput c 1\ninput x 3\n");
  std::mt19937_64 rng(2024);
  oracles::PropGen g{rng, {{"a", 1}, {"b", 1}, {"c", 1}, {"x", 3}}};
  int fails = 0;
  for (int k = 0; k < 500; ++k) {
    auto p = g.property("p" + std::to_string(k));
    auto m = compile_monitor(ts, p);
    std::vector<ir::Valuation> stim;
    for (int t = 0; t < 8; ++t)
      stim.push_back({{"a", rng() & 1}, {"b", rng() & 1}, {"c", rng() & 1}, {"x", rng() & 7}});
    auto tr = ir::simulate(ts, stim);
    auto ev = eval_property_on_trace(p, tr);
    auto mon = oracles::monitor_fail_cycle(m, tr);
    INFO(print_property(p));
    if (ev.verdict == Verdict::Fail) {
      ++fails;
      REQUIRE(mon.has_value());
      CHECK(*mon == ev.fail_cycle);
    } else {
      CHECK_FALSE(mon.has_value());
    }
    // Stickiness and non-interference on the same run.
    auto sim = ir::simulate(m.ts, stim);
    for (std::size_t t = 1; t < sim.size(); ++t)
      CHECK(sim.cycles[t].registers.at(m.fail_reg) >= sim.cycles[t - 1].registers.at(m.fail_reg));
    for (std::size_t t = 0; t < sim.size(); ++t)
      for (const auto& [n, v] : tr.cycles[t].inputs) CHECK(sim.cycles[t].inputs.at(n) == v);
  }
  CHECK(fails > 50);
}
