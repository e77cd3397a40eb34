#pragma once

// Exhaustive satisfiability by bit-parallel enumeration, plus CNF families.

#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "formalign/sat/cnf.hpp"

namespace oracles {

using formalign::sat::Cnf;

// Tries all 2^n assignments, 64 at a time. Variables 1..6 vary inside a word.
inline bool brute_force_sat(const Cnf& cnf) {
  const int n = cnf.num_vars;
  if (n > 26) throw std::invalid_argument("brute force limited to 26 variables");
  static const std::uint64_t kPattern[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                            0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                            0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  const int inner = n < 6 ? n : 6;
  const std::uint64_t valid = inner == 6 ? ~0ull : ((1ull << (1u << inner)) - 1);
  const std::uint64_t blocks = n > 6 ? (1ull << (n - 6)) : 1;
  std::vector<std::uint64_t> word(static_cast<std::size_t>(n) + 1);
  for (std::uint64_t blk = 0; blk < blocks; ++blk) {
    for (int v = 1; v <= n; ++v)
      word[v] = v <= 6 ? kPattern[v - 1] : (((blk >> (v - 7)) & 1) ? ~0ull : 0ull);
    std::uint64_t all = valid;
    for (const auto& c : cnf.clauses) {
      std::uint64_t cw = 0;
      for (int l : c) cw |= l > 0 ? word[l] : ~word[-l];
      all &= cw;
      if (!all) break;
    }
    if (all) return true;
  }
  return false;
}

inline Cnf random_kcnf(std::mt19937_64& rng, int n, int m, int k = 3) {
  Cnf cnf;
  cnf.num_vars = n;
  for (int i = 0; i < m; ++i) {
    std::vector<int> c;
    while (static_cast<int>(c.size()) < k) {
      const int v = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
      bool dup = false;
      for (int l : c) dup = dup || std::abs(l) == v;
      if (dup && n >= k) continue;
      c.push_back((rng() & 1) ? v : -v);
    }
    cnf.add(c);
  }
  return cnf;
}

// p pigeons into h holes; unsatisfiable when p > h.
inline Cnf pigeonhole(int p, int h) {
  Cnf cnf;
  auto x = [&](int i, int j) { return i * h + j + 1; };
  cnf.num_vars = p * h;
  for (int i = 0; i < p; ++i) {
    std::vector<int> c;
    for (int j = 0; j < h; ++j) c.push_back(x(i, j));
    cnf.add(c);
  }
  for (int j = 0; j < h; ++j)
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) cnf.add({-x(a, j), -x(b, j)});
  return cnf;
}

}  // namespace oracles
