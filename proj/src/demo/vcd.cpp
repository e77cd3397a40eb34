#include "formalign/demo/vcd.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <vector>

namespace formalign::demo {

namespace {

std::string vcd_id(std::size_t i) {
  std::string id;
  do {
    id += static_cast<char>(33 + i % 94);
    i /= 94;
  } while (i > 0);
  return id;
}

std::string value_text(std::uint64_t v, unsigned width, const std::string& id) {
  if (width == 1) return std::to_string(v & 1) + id;
  std::string bits;
  do {
    bits.insert(bits.begin(), static_cast<char>('0' + (v & 1)));
    v >>= 1;
  } while (v);
  return "b" + bits + " " + id;
}

struct Var {
  int section;
  std::string name;
  unsigned width;
  std::string id;
};

const char* kSections[] = {"inputs", "registers", "wires", "outputs"};

const ir::Valuation& section(const ir::Cycle& c, int s) {
  switch (s) {
    case 0: return c.inputs;
    case 1: return c.registers;
    case 2: return c.wires;
    default: return c.outputs;
  }
}

ir::Valuation& section(ir::Cycle& c, int s) {
  return const_cast<ir::Valuation&>(section(static_cast<const ir::Cycle&>(c), s));
}

}  // namespace

void write_vcd(const ir::Trace& tr, const ir::TransitionSystem& ts, std::ostream& out) {
  std::vector<Var> vars;
  if (!tr.cycles.empty())
    for (int s = 0; s < 4; ++s)
      for (const auto& [name, value] : section(tr.cycles[0], s)) {
        auto info = ts.find(name);
        if (!info) throw VcdError("trace signal '" + name + "' is not in the design");
        vars.push_back({s, name, info->width, vcd_id(vars.size())});
      }

  out << "$comment pseudo=" << (tr.pseudo ? 1 : 0) << " $end\n";
  out << "$timescale 1ns $end\n";
  out << "$scope module " << ts.name << " $end\n";
  for (int s = 0; s < 4; ++s) {
    out << "$scope module " << kSections[s] << " $end\n";
    for (const auto& v : vars)
      if (v.section == s)
        out << "$var " << (s == 1 ? "reg" : "wire") << ' ' << v.width << ' ' << v.id << ' ' << v.name
            << " $end\n";
    out << "$upscope $end\n";
  }
  out << "$upscope $end\n$enddefinitions $end\n";

  std::vector<std::uint64_t> last(vars.size());
  for (std::size_t t = 0; t < tr.cycles.size(); ++t) {
    out << '#' << t << '\n';
    if (t == 0) out << "$dumpvars\n";
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const auto& sec = section(tr.cycles[t], vars[i].section);
      auto it = sec.find(vars[i].name);
      if (it == sec.end()) throw VcdError("signal '" + vars[i].name + "' missing at cycle " + std::to_string(t));
      if (t > 0 && it->second == last[i]) continue;
      out << value_text(it->second, vars[i].width, vars[i].id) << '\n';
      last[i] = it->second;
    }
    if (t == 0) out << "$end\n";
  }
}

void write_vcd_file(const ir::Trace& tr, const ir::TransitionSystem& ts, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw VcdError("cannot open '" + path + "' for writing");
  write_vcd(tr, ts, f);
  if (!f) throw VcdError("write to '" + path + "' failed");
}

ir::Trace read_vcd(std::istream& in) {
  ir::Trace tr;
  std::map<std::string, std::pair<int, std::string>> ids;
  std::vector<std::string> scopes;
  std::string tok;
  auto skip_to_end = [&](std::vector<std::string>* words) {
    std::string w;
    while (in >> w && w != "$end")
      if (words) words->push_back(w);
    if (w != "$end") throw VcdError("unterminated declaration");
  };

  bool defs_done = false;
  while (!defs_done && in >> tok) {
    if (tok == "$comment") {
      std::vector<std::string> words;
      skip_to_end(&words);
      for (const auto& w : words)
        if (w.rfind("pseudo=", 0) == 0) tr.pseudo = w == "pseudo=1";
    } else if (tok == "$scope") {
      std::vector<std::string> words;
      skip_to_end(&words);
      if (words.size() != 2) throw VcdError("bad $scope");
      scopes.push_back(words[1]);
    } else if (tok == "$upscope") {
      skip_to_end(nullptr);
      if (scopes.empty()) throw VcdError("unbalanced $upscope");
      scopes.pop_back();
    } else if (tok == "$var") {
      std::vector<std::string> words;
      skip_to_end(&words);
      if (words.size() < 4 || scopes.empty()) throw VcdError("bad $var");
      int s = -1;
      for (int k = 0; k < 4; ++k)
        if (scopes.back() == kSections[k]) s = k;
      if (s < 0) throw VcdError("variable outside a known scope: " + words[3]);
      ids[words[2]] = {s, words[3]};
    } else if (tok == "$enddefinitions") {
      skip_to_end(nullptr);
      defs_done = true;
    } else if (tok[0] == '$') {
      skip_to_end(nullptr);
    } else {
      throw VcdError("unexpected token '" + tok + "' in header");
    }
  }
  if (!defs_done) throw VcdError("missing $enddefinitions");

  auto assign = [&](const std::string& id, std::uint64_t v) {
    auto it = ids.find(id);
    if (it == ids.end()) throw VcdError("unknown identifier '" + id + "'");
    if (tr.cycles.empty()) throw VcdError("value before the first timestep");
    section(tr.cycles.back(), it->second.first)[it->second.second] = v;
  };
  while (in >> tok) {
    if (tok == "$dumpvars" || tok == "$end") continue;
    if (tok[0] == '#') {
      const std::size_t t = std::stoull(tok.substr(1));
      if (t != tr.cycles.size()) throw VcdError("timesteps must count cycles from 0");
      tr.cycles.push_back(tr.cycles.empty() ? ir::Cycle{} : tr.cycles.back());
    } else if (tok[0] == 'b' || tok[0] == 'B') {
      std::string id;
      if (!(in >> id)) throw VcdError("vector value without identifier");
      std::uint64_t v = 0;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] != '0' && tok[i] != '1') throw VcdError("only 0/1 vector values are supported");
        v = (v << 1) | static_cast<std::uint64_t>(tok[i] - '0');
      }
      assign(id, v);
    } else if (tok[0] == '0' || tok[0] == '1') {
      assign(tok.substr(1), static_cast<std::uint64_t>(tok[0] - '0'));
    } else {
      throw VcdError("unexpected token '" + tok + "'");
    }
  }
  return tr;
}

}  // namespace formalign::demo
