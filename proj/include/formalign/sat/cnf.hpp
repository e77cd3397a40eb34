#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formalign::sat {

/// Clause list over variables 1..num_vars; literals are nonzero integers,
/// negative for the complement (DIMACS convention).
struct Cnf {
  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
  std::map<int, std::string> names;  // optional, for debugging

  int new_var() { return ++num_vars; }
  int new_var(std::string name) {
    const int v = new_var();
    names.emplace(v, std::move(name));
    return v;
  }
  void add(std::vector<int> clause);
  void add(std::initializer_list<int> clause) { add(std::vector<int>(clause)); }

  /// True when `model` (indexed by variable, entry 0 unused) satisfies every clause.
  bool satisfied_by(const std::vector<bool>& model) const;
};

class DimacsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_dimacs(const Cnf& cnf);
Cnf parse_dimacs(std::string_view text);

}  // namespace formalign::sat
