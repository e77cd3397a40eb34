#include <doctest.h>

#include <random>

#include "formalign/ir/bitblast.hpp"
#include "formalign/sat/cnf.hpp"
#include "formalign/sat/solver.hpp"
#include "formalign/sat/tseitin.hpp"
#include "oracles/brute_sat.hpp"

using namespace formalign::sat;
using formalign::ir::GateGraph;
using formalign::ir::Node;

TEST_CASE("unit clause is satisfiable with x true") {
  Cnf cnf;
  const int x = cnf.new_var();
  cnf.add({x});
  auto r = solve(cnf);
  REQUIRE(r.sat());
  CHECK(r.value(x));
}

TEST_CASE("x and not x is unsatisfiable") {
  Cnf cnf;
  const int x = cnf.new_var();
  cnf.add({x});
  cnf.add({-x});
  CHECK(solve(cnf).unsat());
}

TEST_CASE("empty clause and empty formula") {
  Cnf cnf;
  cnf.num_vars = 2;
  CHECK(solve(cnf).sat());
  cnf.clauses.push_back({});
  CHECK(solve(cnf).unsat());
}

TEST_CASE("pigeonhole instances") {
  CHECK(solve(oracles::pigeonhole(4, 3)).unsat());
  CHECK(solve(oracles::pigeonhole(5, 4)).unsat());
  CHECK(solve(oracles::pigeonhole(4, 4)).sat());
}

TEST_CASE("random 3-CNFs agree with exhaustive enumeration") {
  std::mt19937_64 rng(1);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 300; ++i) {
    const int n = 3 + static_cast<int>(rng() % 18);
    const int m = static_cast<int>(n * (3.0 + static_cast<double>(rng() % 250) / 100.0));
    auto cnf = oracles::random_kcnf(rng, n, m);
    auto r = solve(cnf);
    const bool expect = oracles::brute_force_sat(cnf);
    REQUIRE(r.status != Status::Unknown);
    CHECK(r.sat() == expect);
    if (r.sat()) CHECK(cnf.satisfied_by(r.model));
    (expect ? sat : unsat)++;
  }
  CHECK(sat > 30);
  CHECK(unsat > 30);
}

TEST_CASE("same formula and seed give the same answer and conflict count") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    auto cnf = oracles::random_kcnf(rng, 60, 256);
    for (std::uint64_t seed : {0ull, 17ull}) {
      SolverOptions opt;
      opt.seed = seed;
      auto a = solve(cnf, opt);
      auto b = solve(cnf, opt);
      CHECK(a.status == b.status);
      CHECK(a.stats.conflicts == b.stats.conflicts);
      CHECK(a.model == b.model);
    }
  }
}

TEST_CASE("exhausted conflict budget reports unknown") {
  SolverOptions opt;
  opt.conflict_budget = 5;
  auto r = solve(oracles::pigeonhole(7, 6), opt);
  CHECK(r.status == Status::Unknown);
  CHECK(r.stats.conflicts == 5);
}

TEST_CASE("DIMACS round trip") {
  std::mt19937_64 rng(4);
  auto cnf = oracles::random_kcnf(rng, 10, 30);
  auto back = parse_dimacs(to_dimacs(cnf));
  CHECK(back.num_vars == cnf.num_vars);
  CHECK(back.clauses == cnf.clauses);
  CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 3 0\n"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 2 0\n"), DimacsError);
}

TEST_CASE("Tseitin clause shapes") {
  GateGraph g;
  const Node a = g.input("a"), b = g.input("b");
  {
    Cnf cnf;
    TseitinEncoder enc(g, cnf);
    const int o = enc.lit(g.land(a, b));
    REQUIRE(cnf.clauses.size() == 3);
    const int la = enc.lit(a), lb = enc.lit(b);
    CHECK(cnf.clauses[0] == std::vector<int>{-o, la});
    CHECK(cnf.clauses[1] == std::vector<int>{-o, lb});
    CHECK(cnf.clauses[2] == std::vector<int>{o, -la, -lb});
  }
  {
    Cnf cnf;
    TseitinEncoder enc(g, cnf);
    enc.lit(g.lxor(a, b));
    CHECK(cnf.clauses.size() == 4);
    const auto before = cnf.clauses.size();
    enc.lit(g.lnot(g.lxor(a, b)));
    CHECK(cnf.clauses.size() == before);  // negation costs nothing
  }
}

TEST_CASE("random gate netlists: projected models equal the truth table") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    GateGraph g;
    const int n_in = 2 + static_cast<int>(rng() % 7);
    std::vector<Node> pool;
    for (int i = 0; i < n_in; ++i) pool.push_back(g.input());
    const std::vector<Node> inputs = pool;
    for (int i = 0; i < 8; ++i) {
      const Node x = pool[rng() % pool.size()], y = pool[rng() % pool.size()];
      switch (rng() % 4) {
        case 0: pool.push_back(g.land(x, y)); break;
        case 1: pool.push_back(g.lor(x, y)); break;
        case 2: pool.push_back(g.lxor(x, y)); break;
        default: pool.push_back(g.lnot(x)); break;
      }
    }
    const Node out = pool.back();
    for (unsigned m = 0; m < (1u << n_in); ++m) {
      auto vals = g.evaluate([&](Node n) {
        for (int i = 0; i < n_in; ++i)
          if (inputs[i] == n) return ((m >> i) & 1) != 0;
        return false;
      });
      // Fixing the inputs, the encoding is satisfiable with out=v exactly when v is the table value.
      for (bool want : {false, true}) {
        Cnf cnf;
        TseitinEncoder enc(g, cnf);
        for (int i = 0; i < n_in; ++i) {
          const int v = cnf.new_var();
          enc.bind(inputs[i], v);
          cnf.add({((m >> i) & 1) ? v : -v});
        }
        const int o = enc.lit(out);
        cnf.add({want ? o : -o});
        CHECK(solve(cnf).sat() == (static_cast<bool>(vals[out]) == want));
      }
    }
  }
}
