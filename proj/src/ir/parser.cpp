#include "formalign/ir/parser.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace formalign::ir {

const TransitionSystem& ParseResult::value() const {
  if (!system) throw IrError(diagnostics.empty() ? DiagCode::Syntax : diagnostics.front().code,
                             error_text());
  return *system;
}

std::string ParseResult::error_text() const {
  std::string out;
  for (const auto& d : diagnostics) {
    if (!out.empty()) out += '\n';
    out += d.to_string();
  }
  return out;
}

std::optional<std::uint64_t> parse_uint(std::string_view t) {
  if (t.empty()) return std::nullopt;
  int base = 10;
  if (t.size() > 2 && t[0] == '0' && (t[1] == 'x' || t[1] == 'X')) {
    base = 16;
    t.remove_prefix(2);
  }
  std::uint64_t v = 0;
  for (char c : t) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (base == 16 && c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else if (c == '_') continue;
    else return std::nullopt;
    const std::uint64_t nv = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
    if (nv / static_cast<std::uint64_t>(base) != v && v != 0) return std::nullopt;
    v = nv;
  }
  return v;
}

namespace {

bool is_ident(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$'))
      return false;
  return true;
}

struct SNode {
  bool list = false;
  std::string atom;
  std::vector<SNode> items;
  int line = 0;
  int col = 0;
};

class SexprReader {
 public:
  SexprReader(std::string_view text, int line, int col_offset)
      : text_(text), line_(line), col_offset_(col_offset) {}

  // Reads exactly one S-expression spanning the rest of the input.
  SNode read_all() {
    SNode n = read();
    skip_ws();
    if (pos_ < text_.size()) fail("unexpected trailing text");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Diagnostic{DiagCode::Syntax, msg, line_, col()};
  }
  int col() const { return col_offset_ + static_cast<int>(pos_) + 1; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  SNode read() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    SNode n;
    n.line = line_;
    n.col = col();
    if (text_[pos_] == '(') {
      n.list = true;
      ++pos_;
      for (;;) {
        skip_ws();
        if (pos_ >= text_.size()) fail("missing ')'");
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        n.items.push_back(read());
      }
      if (n.items.empty()) fail("empty list");
      return n;
    }
    if (text_[pos_] == ')') fail("unexpected ')'");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    n.atom = std::string(text_.substr(start, pos_ - start));
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_;
  int col_offset_;
};

const std::map<std::string, Op, std::less<>>& op_table() {
  static const std::map<std::string, Op, std::less<>> t = {
      {"const", Op::Const}, {"var", Op::Var},     {"not", Op::Not},
      {"and", Op::And},     {"or", Op::Or},       {"xor", Op::Xor},
      {"eq", Op::Eq},       {"neq", Op::Neq},     {"ult", Op::Ult},
      {"add", Op::Add},     {"sub", Op::Sub},     {"mux", Op::Mux},
      {"slice", Op::Slice}, {"concat", Op::Concat}, {"zext", Op::Zext},
      {"redor", Op::RedOr}, {"redand", Op::RedAnd},
  };
  return t;
}

// Resolves signal widths, possibly by typing a wire on demand.
using Resolver = std::function<std::optional<unsigned>(const std::string&, const SNode&)>;

Expr build(const SNode& n, const Resolver& resolve) {
  auto err = [&](DiagCode c, const std::string& msg) -> Diagnostic {
    return Diagnostic{c, msg, n.line, n.col};
  };
  if (!n.list) {
    if (!is_ident(n.atom)) throw err(DiagCode::Syntax, "expected signal name, got '" + n.atom + "'");
    auto w = resolve(n.atom, n);
    if (!w) throw err(DiagCode::UnknownName, "unknown signal '" + n.atom + "'");
    return var(n.atom, *w);
  }
  const SNode& head = n.items[0];
  if (head.list) throw err(DiagCode::Syntax, "operator expected");
  auto it = op_table().find(head.atom);
  if (it == op_table().end()) throw err(DiagCode::Syntax, "unknown operator '" + head.atom + "'");
  const Op op = it->second;
  auto number = [&](std::size_t i) -> std::uint64_t {
    if (i >= n.items.size() || n.items[i].list)
      throw err(DiagCode::Syntax, std::string(op_name(op)) + ": expected number operand");
    auto v = parse_uint(n.items[i].atom);
    if (!v) throw err(DiagCode::Syntax, "bad number '" + n.items[i].atom + "'");
    return *v;
  };
  auto arity = [&](std::size_t k) {
    if (n.items.size() != k + 1)
      throw err(DiagCode::Syntax, std::string(op_name(op)) + " expects " + std::to_string(k) +
                                      " operand(s)");
  };
  try {
    switch (op) {
      case Op::Const:
        arity(2);
        return constant(static_cast<unsigned>(number(1)), number(2));
      case Op::Var: {
        arity(1);
        const SNode& a = n.items[1];
        if (a.list) throw err(DiagCode::Syntax, "var expects a name");
        return build(a, resolve);
      }
      case Op::Slice:
        arity(3);
        return slice(build(n.items[1], resolve), static_cast<unsigned>(number(2)),
                     static_cast<unsigned>(number(3)));
      case Op::Zext:
        arity(2);
        return zext(build(n.items[1], resolve), static_cast<unsigned>(number(2)));
      default: {
        std::vector<Expr> args;
        for (std::size_t i = 1; i < n.items.size(); ++i) args.push_back(build(n.items[i], resolve));
        return make(op, std::move(args));
      }
    }
  } catch (const IrError& e) {
    throw err(e.code(), e.what());
  }
}

struct Decl {
  std::string keyword;
  std::string name;
  int line = 0;
  int col = 0;
  unsigned width = 0;
  std::uint64_t init = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> range;
  std::optional<SNode> body;
};

struct Token {
  std::string text;
  int col;
  std::size_t offset;
};

std::vector<Token> split_tokens(std::string_view line, std::size_t max_tokens) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size() && out.size() < max_tokens) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size()) break;
    const std::size_t s = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({std::string(line.substr(s, i - s)), static_cast<int>(s) + 1, s});
  }
  return out;
}

}  // namespace

ParseResult parse_ir(std::string_view text) {
  ParseResult result;
  auto& diags = result.diagnostics;
  std::vector<Decl> decls;
  std::string module_name = "top";
  std::unordered_set<std::string> broken_next;  // avoids a cascading missing-next

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                            : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto head = split_tokens(line, 2);
    if (head.empty()) continue;
    auto syntax = [&](int col, const std::string& msg) {
      diags.push_back({DiagCode::Syntax, msg, line_no, col});
    };
    const std::string& kw = head[0].text;
    if (head.size() < 2) {
      syntax(head[0].col, "'" + kw + "' needs a name");
      continue;
    }
    Decl d;
    d.keyword = kw;
    d.name = head[1].text;
    d.line = line_no;
    d.col = head[1].col;
    if (!is_ident(d.name)) {
      syntax(d.col, "invalid name '" + d.name + "'");
      continue;
    }
    const std::size_t rest_off = head[1].offset + head[1].text.size();
    std::string_view rest = line.substr(rest_off);
    auto nums = [&](std::size_t min_n, std::size_t max_n) -> std::optional<std::vector<std::uint64_t>> {
      auto toks = split_tokens(rest, 16);
      if (toks.size() < min_n || toks.size() > max_n) {
        syntax(d.col, "'" + kw + "' has wrong number of fields");
        return std::nullopt;
      }
      std::vector<std::uint64_t> v;
      for (const auto& t : toks) {
        auto n = parse_uint(t.text);
        if (!n) {
          syntax(static_cast<int>(rest_off) + t.col, "bad number '" + t.text + "'");
          return std::nullopt;
        }
        v.push_back(*n);
      }
      return v;
    };
    if (kw == "module") {
      module_name = d.name;
      if (!split_tokens(rest, 1).empty()) syntax(d.col, "trailing text after module name");
      continue;
    }
    if (kw == "input") {
      auto v = nums(1, 1);
      if (!v) continue;
      d.width = static_cast<unsigned>((*v)[0]);
    } else if (kw == "analog") {
      auto v = nums(1, 3);
      if (!v) continue;
      if (v->size() == 2) {
        syntax(d.col, "analog range needs both min and max");
        continue;
      }
      d.width = static_cast<unsigned>((*v)[0]);
      if (v->size() == 3) d.range = std::make_pair((*v)[1], (*v)[2]);
    } else if (kw == "reg") {
      auto toks = split_tokens(rest, 8);
      if (toks.size() != 3 || toks[1].text != "init") {
        syntax(d.col, "expected 'reg <name> <width> init <const>'");
        continue;
      }
      auto w = parse_uint(toks[0].text);
      auto c = parse_uint(toks[2].text);
      if (!w || !c) {
        syntax(d.col, "bad number in reg declaration");
        continue;
      }
      d.width = static_cast<unsigned>(*w);
      d.init = *c;
    } else if (kw == "next" || kw == "wire" || kw == "output" || kw == "assume") {
      try {
        SexprReader reader(rest, line_no, static_cast<int>(rest_off));
        d.body = reader.read_all();
      } catch (const Diagnostic& e) {
        diags.push_back(e);
        if (kw == "next") broken_next.insert(d.name);
        continue;
      }
    } else {
      syntax(head[0].col, "unknown keyword '" + kw + "'");
      continue;
    }
    decls.push_back(std::move(d));
  }

  // Declarations and duplicate detection.
  TransitionSystem ts;
  ts.name = module_name;
  std::unordered_map<std::string, const Decl*> comb;  // wire/output bodies
  std::unordered_map<std::string, unsigned> widths;
  std::unordered_map<std::string, const Decl*> nexts;
  std::unordered_map<std::string, bool> declared;
  for (const auto& d : decls) {
    if (d.keyword == "next") {
      if (nexts.count(d.name)) {
        diags.push_back({DiagCode::DuplicateName, "duplicate next for '" + d.name + "'", d.line, d.col});
        continue;
      }
      nexts[d.name] = &d;
      continue;
    }
    if (declared.count(d.name)) {
      diags.push_back({DiagCode::DuplicateName, "duplicate name '" + d.name + "'", d.line, d.col});
      continue;
    }
    declared[d.name] = true;
    if (d.keyword == "input" || d.keyword == "analog" || d.keyword == "reg") {
      if (d.width == 0 || d.width > kMaxWidth) {
        diags.push_back({DiagCode::WidthMismatch,
                         "'" + d.name + "' width " + std::to_string(d.width) + " outside 1..64",
                         d.line, d.col});
        continue;
      }
      widths[d.name] = d.width;
    } else if (d.keyword == "wire" || d.keyword == "output") {
      comb[d.name] = &d;
    }
  }

  // Type wires/outputs on demand, detecting cycles.
  std::unordered_map<std::string, Expr> typed;
  std::unordered_map<std::string, int> state;  // 1 = in progress, 2 = done/failed
  std::function<std::optional<unsigned>(const std::string&, const SNode&)> resolve;
  std::function<Expr(const Decl&)> type_comb = [&](const Decl& d) -> Expr {
    int& st = state[d.name];
    if (st == 2) {
      auto it = typed.find(d.name);
      return it == typed.end() ? nullptr : it->second;
    }
    st = 1;
    Expr e;
    try {
      e = build(*d.body, resolve);
    } catch (const Diagnostic& diag) {
      // A cycle is reported once, at the definition that closes it.
      if (diag.code != DiagCode::CombinationalCycle || diag.message.find("'" + d.name + "'") != std::string::npos)
        diags.push_back(diag);
      else
        throw;
    }
    state[d.name] = 2;
    if (e) typed[d.name] = e;
    return e;
  };
  resolve = [&](const std::string& name, const SNode& at) -> std::optional<unsigned> {
    if (auto it = widths.find(name); it != widths.end()) return it->second;
    auto c = comb.find(name);
    if (c == comb.end()) return std::nullopt;
    int st = state[name];
    if (st == 1) {
      throw Diagnostic{DiagCode::CombinationalCycle,
                       "combinational cycle through '" + name + "'", at.line, at.col};
    }
    Expr e = type_comb(*c->second);
    if (!e) {
      // Typing failed; report as unknown width but avoid cascades.
      throw Diagnostic{DiagCode::UnknownName, "'" + name + "' could not be typed", at.line, at.col};
    }
    return e->width();
  };

  for (const auto& d : decls) {
    if ((d.keyword == "wire" || d.keyword == "output") && comb.count(d.name) &&
        comb[d.name] == &d) {
      try {
        type_comb(d);
      } catch (const Diagnostic& diag) {
        diags.push_back(diag);
      }
    }
  }

  // Assemble in declaration order.
  for (const auto& d : decls) {
    try {
      if (d.keyword == "input" && widths.count(d.name)) {
        ts.inputs.push_back({d.name, d.width});
      } else if (d.keyword == "analog" && widths.count(d.name)) {
        if (d.range && d.range->first > d.range->second) {
          diags.push_back({DiagCode::BadRange, "analog '" + d.name + "' has min > max", d.line, d.col});
        }
        ts.analogs.push_back({d.name, d.width, d.range});
      } else if (d.keyword == "reg" && widths.count(d.name)) {
        if ((d.init & ~width_mask(d.width)) != 0) {
          diags.push_back({DiagCode::WidthMismatch, "init of '" + d.name + "' does not fit in " +
                                                        std::to_string(d.width) + " bits",
                           d.line, d.col});
        }
        Register r{d.name, d.width, d.init, nullptr};
        auto nx = nexts.find(d.name);
        if (nx == nexts.end()) {
          if (!broken_next.count(d.name))
            diags.push_back({DiagCode::MissingNext, "register '" + d.name + "' has no next", d.line, d.col});
        } else {
          try {
            r.next = build(*nx->second->body, resolve);
            if (r.next->width() != d.width) {
              diags.push_back({DiagCode::WidthMismatch,
                               "next of '" + d.name + "' has width " +
                                   std::to_string(r.next->width()) + ", register is " +
                                   std::to_string(d.width),
                               nx->second->line, nx->second->col});
            }
          } catch (const Diagnostic& diag) {
            diags.push_back(diag);
          }
        }
        ts.registers.push_back(std::move(r));
      } else if (d.keyword == "wire" || d.keyword == "output") {
        auto it = typed.find(d.name);
        if (it != typed.end() && comb[d.name] == &d) {
          (d.keyword == "wire" ? ts.wires : ts.outputs).push_back({d.name, it->second});
        }
      } else if (d.keyword == "assume") {
        try {
          Expr e = build(*d.body, resolve);
          if (e->width() != 1) {
            diags.push_back({DiagCode::WidthMismatch, "assumption '" + d.name + "' must be 1 bit",
                             d.line, d.col});
          }
          ts.assumptions.push_back({d.name, e});
        } catch (const Diagnostic& diag) {
          diags.push_back(diag);
        }
      }
    } catch (const Diagnostic& diag) {
      diags.push_back(diag);
    }
  }
  for (const auto& [name, d] : nexts) {
    if (!widths.count(name) || !ts.find_register(name)) {
      bool is_reg = false;
      for (const auto& dd : decls) is_reg = is_reg || (dd.keyword == "reg" && dd.name == name);
      if (!is_reg)
        diags.push_back({DiagCode::UnknownName, "next for unknown register '" + name + "'",
                         d->line, d->col});
    }
  }

  if (diags.empty()) {
    auto extra = ts.validate();
    diags.insert(diags.end(), extra.begin(), extra.end());
  }
  if (diags.empty()) {
    result.system = std::move(ts);
  } else {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  }
  return result;
}

TransitionSystem parse_ir_or_throw(std::string_view text) {
  auto r = parse_ir(text);
  if (!r.ok()) throw IrError(r.diagnostics.front().code, r.error_text());
  return std::move(*r.system);
}

Expr parse_sexpr(std::string_view text, const TransitionSystem& ts) {
  SNode n;
  try {
    n = SexprReader(text, 1, 0).read_all();
    return build(n, [&](const std::string& name, const SNode&) -> std::optional<unsigned> {
      auto info = ts.find(name);
      if (!info || info->kind == SignalKind::Assumption) return std::nullopt;
      return info->width;
    });
  } catch (const Diagnostic& d) {
    throw IrError(d.code, d.to_string());
  }
}

std::string print_ir(const TransitionSystem& ts) {
  std::ostringstream os;
  os << "module " << ts.name << '\n';
  for (const auto& p : ts.inputs) os << "input  " << p.name << ' ' << p.width << '\n';
  for (const auto& a : ts.analogs) {
    os << "analog " << a.name << ' ' << a.width;
    if (a.range) os << ' ' << a.range->first << ' ' << a.range->second;
    os << '\n';
  }
  for (const auto& r : ts.registers) os << "reg    " << r.name << ' ' << r.width << " init " << r.init << '\n';
  for (const auto& r : ts.registers)
    if (r.next) os << "next   " << r.name << ' ' << to_sexpr(r.next) << '\n';
  for (const auto& w : ts.wires) os << "wire   " << w.name << ' ' << to_sexpr(w.expr) << '\n';
  for (const auto& o : ts.outputs) os << "output " << o.name << ' ' << to_sexpr(o.expr) << '\n';
  for (const auto& a : ts.assumptions) os << "assume " << a.name << ' ' << to_sexpr(a.expr) << '\n';
  return os.str();
}

}  // namespace formalign::ir
