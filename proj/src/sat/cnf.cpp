#include "formalign/sat/cnf.hpp"

#include <cstdlib>
#include <sstream>

namespace formalign::sat {

void Cnf::add(std::vector<int> clause) {
  for (int l : clause) {
    if (l == 0 || std::abs(l) > num_vars)
      throw std::invalid_argument("literal " + std::to_string(l) + " outside 1.." +
                                  std::to_string(num_vars));
  }
  clauses.push_back(std::move(clause));
}

bool Cnf::satisfied_by(const std::vector<bool>& model) const {
  for (const auto& c : clauses) {
    bool sat = false;
    for (int l : c) {
      const bool v = model[static_cast<std::size_t>(std::abs(l))];
      if ((l > 0) == v) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::string to_dimacs(const Cnf& cnf) {
  std::ostringstream os;
  for (const auto& [v, name] : cnf.names) os << "c " << v << ' ' << name << '\n';
  os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& c : cnf.clauses) {
    for (int l : c) os << l << ' ';
    os << "0\n";
  }
  return os.str();
}

Cnf parse_dimacs(std::string_view text) {
  Cnf cnf;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header = false;
  long declared_clauses = 0;
  std::vector<int> cur;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      long vars = -1;
      if (!(ls >> fmt >> vars >> declared_clauses) || fmt != "cnf" || vars < 0 || declared_clauses < 0)
        throw DimacsError("line " + std::to_string(line_no) + ": bad problem line");
      cnf.num_vars = static_cast<int>(vars);
      header = true;
      continue;
    }
    if (!header) throw DimacsError("line " + std::to_string(line_no) + ": clause before header");
    std::istringstream toks(line);
    long lit;
    while (toks >> lit) {
      if (lit == 0) {
        cnf.add(cur);
        cur.clear();
      } else {
        if (std::labs(lit) > cnf.num_vars)
          throw DimacsError("line " + std::to_string(line_no) + ": literal " + std::to_string(lit) +
                            " exceeds declared variable count");
        cur.push_back(static_cast<int>(lit));
      }
    }
    if (!toks.eof()) throw DimacsError("line " + std::to_string(line_no) + ": bad token");
  }
  if (!cur.empty()) cnf.add(cur);
  if (!header) throw DimacsError("missing 'p cnf' header");
  if (static_cast<long>(cnf.clauses.size()) != declared_clauses)
    throw DimacsError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                      std::to_string(cnf.clauses.size()));
  return cnf;
}

}  // namespace formalign::sat
