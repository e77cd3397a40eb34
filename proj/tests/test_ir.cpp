#include <doctest.h>

#include <random>
#include <set>

#include "formalign/ir/bitblast.hpp"
#include "formalign/ir/interp.hpp"
#include "formalign/ir/lowering.hpp"
#include "formalign/ir/parser.hpp"
#include "oracles/random_ts.hpp"

using namespace formalign::ir;

namespace {

const char* kCounter = R"(module cnt
reg c 2 init 0
next c (add c (const 2 1))
output y c
)";

DiagCode first_code(const std::string& text) {
  auto r = parse_ir(text);
  REQUIRE_FALSE(r.ok());
  return r.diagnostics.front().code;
}

}  // namespace

TEST_CASE("parse the 2-bit counter") {
  auto r = parse_ir(kCounter);
  REQUIRE(r.ok());
  const auto& ts = r.value();
  CHECK(ts.name == "cnt");
  REQUIRE(ts.registers.size() == 1);
  CHECK(ts.registers[0].width == 2);
  CHECK(ts.outputs.size() == 1);
}

TEST_CASE("width mismatch names the add operands") {
  auto r = parse_ir("reg c 2 init 0\nnext c (add c (const 3 1))\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.front().code == DiagCode::WidthMismatch);
  CHECK(r.error_text().find("add") != std::string::npos);
  CHECK(r.diagnostics.front().line == 2);
}

TEST_CASE("each error class has its own code") {
  CHECK(first_code("reg c 2 init 0\nnext c (add c\n") == DiagCode::Syntax);
  CHECK(first_code("input a 1\ninput a 1\n") == DiagCode::DuplicateName);
  CHECK(first_code("reg c 1 init 0\n") == DiagCode::MissingNext);
  CHECK(first_code("input a 1\nwire x (and a y)\nwire y (not x)\n") == DiagCode::CombinationalCycle);
  CHECK(first_code("reg c 1 init 0\nnext c q\n") == DiagCode::UnknownName);
  CHECK(first_code("analog v 4 9 3\n") == DiagCode::BadRange);
  CHECK(first_code("frob x 1\n") == DiagCode::Syntax);
  CHECK(first_code("input a 2\nassume a_ok a\n") == DiagCode::WidthMismatch);

  std::set<std::string_view> names;
  for (auto c : {DiagCode::Syntax, DiagCode::WidthMismatch, DiagCode::DuplicateName,
                 DiagCode::MissingNext, DiagCode::CombinationalCycle, DiagCode::UnknownName,
                 DiagCode::BadRange})
    names.insert(diag_code_name(c));
  CHECK(names.size() == 7);
}

TEST_CASE("syntax errors carry line and column") {
  auto r = parse_ir("input a 1\nwire x (and a a))\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.front().line == 2);
  CHECK(r.diagnostics.front().col == 17);
}

TEST_CASE("parse accepts hex, comments, var forms and forward wire references") {
  auto r = parse_ir(R"(
# header comment
module m
input a 8
wire lo (slice hi 3 0)   # uses a wire declared later
wire hi (xor (var a) (const 8 0xF0))
output o (concat lo (const 4 0xa))
)");
  REQUIRE_MESSAGE(r.ok(), r.error_text());
  auto out = Interpreter(r.value()).step({}, {{"a", 0x3C}});
  CHECK(out.wires.at("hi") == 0xCC);
  CHECK(out.outputs.at("o") == 0xCA);
}

TEST_CASE("print then parse reproduces the system") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto ts = oracles::random_ts(rng);
    ts.add_analog("va", 3, std::make_pair(1, 6));
    const std::string text = print_ir(ts);
    auto r = parse_ir(text);
    REQUIRE_MESSAGE(r.ok(), r.error_text() << "\n" << text);
    CHECK(print_ir(r.value()) == text);
  }
}

TEST_CASE("counter wraps around") {
  auto ts = parse_ir_or_throw(kCounter);
  auto out = eval_step(ts, {{"c", 3}}, {});
  CHECK(out.next.at("c") == 0);
  CHECK(out.outputs.at("y") == 3);
}

TEST_CASE("mux with constant-true condition selects the first arm") {
  auto ts = parse_ir_or_throw("input a 4\ninput b 4\noutput y (mux (const 1 1) a b)\n");
  Interpreter in(ts);
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b) CHECK(in.step({}, {{"a", a}, {"b", b}}).outputs.at("y") == a);
}

TEST_CASE("interpreter is deterministic on random stimulus") {
  std::mt19937_64 rng(5);
  auto ts = oracles::random_ts(rng);
  std::vector<Valuation> stim;
  for (int i = 0; i < 2000; ++i) {
    Valuation v;
    for (const auto& p : ts.inputs) v[p.name] = rng() & width_mask(p.width);
    stim.push_back(v);
  }
  auto t1 = simulate(ts, stim);
  auto t2 = simulate(ts, stim);
  CHECK(t1 == t2);
  CHECK_FALSE(validate_trace(ts, t1).has_value());
  t1.cycles[7].registers.begin()->second ^= 1;
  CHECK(validate_trace(ts, t1).has_value());
}

TEST_CASE("bitblast folds (eq x x) to constant true") {
  auto ts = parse_ir_or_throw("input x 4\noutput y (eq x x)\n");
  auto net = bitblast(ts);
  CHECK(net.signals.at("y") == Bits{GateGraph::kTrue});
}

TEST_CASE("4-bit adder, subtractor and ult agree with word arithmetic on all pairs") {
  auto ts = parse_ir_or_throw(
      "input a 4\ninput b 4\noutput s (add a b)\noutput d (sub a b)\noutput l (ult a b)\n");
  auto net = bitblast(ts);
  const Bits& s = net.signals.at("s");
  CHECK(s.size() == 4);
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      auto vals = net.graph.evaluate([&](Node n) {
        for (unsigned i = 0; i < 4; ++i) {
          if (net.signals.at("a")[i] == n) return ((a >> i) & 1) != 0;
          if (net.signals.at("b")[i] == n) return ((b >> i) & 1) != 0;
        }
        return false;
      });
      CHECK(word_value(s, vals) == ((a + b) & 15));
      CHECK(word_value(net.signals.at("d"), vals) == ((a - b) & 15));
      CHECK(word_value(net.signals.at("l"), vals) == (a < b ? 1u : 0u));
    }
  }
}

TEST_CASE("bit-level and word-level evaluation agree on random systems") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 40; ++k) {
    auto ts = oracles::random_ts(rng, {12, 2, 4, true});
    auto net = bitblast(ts);
    Interpreter interp(ts);
    std::unordered_map<Node, bool> leaf;
    for (int sample = 0; sample < 250; ++sample) {
      State s;
      Valuation in;
      for (const auto& p : ts.inputs) in[p.name] = rng() & width_mask(p.width);
      for (const auto& r : ts.registers) s[r.name] = rng() & width_mask(r.width);
      leaf.clear();
      auto bind = [&](const Valuation& v) {
        for (const auto& [name, val] : v) {
          const Bits& b = net.signals.at(name);
          for (std::size_t i = 0; i < b.size(); ++i) leaf[b[i]] = (val >> i) & 1;
        }
      };
      bind(s);
      bind(in);
      auto vals = net.graph.evaluate([&](Node n) { return leaf[n]; });
      auto word = interp.step(s, in);
      for (const auto& [name, v] : word.next) CHECK(word_value(net.next.at(name), vals) == v);
      for (const auto& [name, v] : word.wires) CHECK(word_value(net.signals.at(name), vals) == v);
      for (const auto& [name, v] : word.outputs) CHECK(word_value(net.signals.at(name), vals) == v);
    }
  }
}

TEST_CASE("delay_to_flops with n=1 adds one register") {
  auto ts = parse_ir_or_throw("input a 1\nwire w (not a)\n");
  auto low = delay_to_flops(ts, "w", 1);
  CHECK(low.registers.size() == 1);
  CHECK(low.has("w_dly1"));
  auto tr = simulate(low, {{{"a", 0}}, {{"a", 1}}, {{"a", 1}}});
  CHECK(tr.cycles[0].wires.at("w_dly1") == 0);
  CHECK(tr.cycles[1].wires.at("w_dly1") == 1);
  CHECK(tr.cycles[2].wires.at("w_dly1") == 0);
}

TEST_CASE("delay_to_flops rejects n=0 and unknown signals") {
  auto ts = parse_ir_or_throw("input a 1\n");
  CHECK_THROWS_AS(delay_to_flops(ts, "a", 0), IrError);
  CHECK_THROWS_AS(delay_to_flops(ts, "nope", 2), IrError);
}

TEST_CASE("delay of 3 then composition of 2 and 1 both shift by 3") {
  auto ts = parse_ir_or_throw("input ack 1\ninput d 3\n");
  auto d3 = delay_to_flops(ts, "ack", 3);
  auto d21 = delay_to_flops(delay_to_flops(ts, "ack", 2), "ack_dly2", 1);
  std::mt19937_64 rng(3);
  std::vector<Valuation> stim;
  for (int i = 0; i < 10000; ++i) stim.push_back({{"ack", rng() & 1}, {"d", rng() & 7}});
  auto t3 = simulate(d3, stim);
  auto t21 = simulate(d21, stim);
  for (std::size_t i = 0; i < stim.size(); ++i) {
    const std::uint64_t want = i >= 3 ? stim[i - 3].at("ack") : 0;
    REQUIRE(t3.cycles[i].wires.at("ack_dly3") == want);
    REQUIRE(t21.cycles[i].wires.at("ack_dly2_dly1") == want);
  }
}

TEST_CASE("analog lowering") {
  auto ts = parse_ir_or_throw("analog vref 4 2 13\nanalog en 1\noutput o (and en en)\n");
  auto low = lower_analog_ports(ts);
  CHECK(low.analogs.empty());
  REQUIRE(low.inputs.size() == 2);
  CHECK(low.inputs[0].name == "vref");
  CHECK(low.inputs[0].width == 4);
  REQUIRE(low.assumptions.size() == 1);
  Interpreter in(low);
  for (std::uint64_t v = 0; v < 16; ++v) {
    auto r = in.step({}, {{"vref", v}, {"en", 0}});
    CHECK(r.assumptions.at("vref_in_range") == (v >= 2 && v <= 13 ? 1u : 0u));
  }
  TransitionSystem bad;
  bad.add_analog("v", 4, std::make_pair(9, 3));
  CHECK_THROWS_AS(lower_analog_ports(bad), IrError);
}
