#include "formalign/props/parser.hpp"

#include <cctype>
#include <sstream>
#include <unordered_set>

namespace formalign::props {

std::string PropDiagnostic::to_string() const {
  std::ostringstream os;
  os << line << ':' << col << ": " << message;
  return os.str();
}

namespace {
std::string join(const std::vector<PropDiagnostic>& d) {
  std::string out;
  for (const auto& x : d) {
    if (!out.empty()) out += '\n';
    out += x.to_string();
  }
  return out;
}
}  // namespace

PropError::PropError(std::vector<PropDiagnostic> diags)
    : std::runtime_error(join(diags)), diags_(std::move(diags)) {}

namespace {

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t value = 0;
  int line = 0;
  int col = 0;
};

struct Lexed {
  std::vector<Token> tokens;
  std::vector<Finding> findings;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

Lexed lex(std::string_view src) {
  Lexed out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  auto fail = [&](const std::string& msg) { throw PropError({{line, col, msg}}); };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      bump(1);
      continue;
    }
    const bool hash_comment = c == '#' && (i + 1 >= src.size() || src[i + 1] != '#');
    const bool slash_comment = c == '/' && i + 1 < src.size() && src[i + 1] == '/';
    if (hash_comment || slash_comment) {
      std::size_t e = src.find('\n', i);
      if (e == std::string_view::npos) e = src.size();
      std::string body = trim(std::string(src.substr(i + (hash_comment ? 1 : 2), e - i - (hash_comment ? 1 : 2))));
      if (hash_comment && body.rfind("FINDING ", 0) == 0) {
        std::string rest = body.substr(8);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) {
          out.findings.push_back({"", trim(rest)});
        } else {
          out.findings.push_back({trim(rest.substr(0, colon)), trim(rest.substr(colon + 1))});
        }
      }
      bump(e - i);
      continue;
    }
    Token t{Tok::Punct, "", 0, line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t j = i + 1;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '.'))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      bump(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      int base = 10;
      if (c == '0' && i + 1 < src.size() && (src[i + 1] == 'x' || src[i + 1] == 'X')) {
        base = 16;
        j += 2;
      }
      const std::size_t digits = j;
      while (j < src.size() && (base == 16 ? std::isxdigit(static_cast<unsigned char>(src[j]))
                                           : std::isdigit(static_cast<unsigned char>(src[j])) != 0))
        ++j;
      if (j == digits) fail("malformed number");
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        fail("malformed number");
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      std::uint64_t v = 0;
      for (std::size_t k = digits; k < j; ++k) {
        const char d = src[k];
        const unsigned dv = std::isdigit(static_cast<unsigned char>(d)) ? d - '0' : (std::tolower(d) - 'a' + 10);
        const std::uint64_t nv = v * static_cast<unsigned>(base) + dv;
        if (nv / static_cast<unsigned>(base) != v) fail("number too large");
        v = nv;
      }
      t.value = v;
      bump(j - i);
    } else {
      static const char* kPuncts[] = {"|->", "|=>", "##", "&&", "||", "==", "!=", "(", ")", "[",
                                      "]",   ":",   ";",  ",",  "!"};
      bool matched = false;
      for (const char* p : kPuncts) {
        const std::string_view ps(p);
        if (src.substr(i, ps.size()) == ps) {
          t.text = std::string(ps);
          bump(ps.size());
          matched = true;
          break;
        }
      }
      if (!matched) fail(std::string("unexpected character '") + c + "'");
    }
    out.tokens.push_back(std::move(t));
  }
  out.tokens.push_back({Tok::End, "", 0, line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  PropFile file(std::vector<Finding> findings) {
    PropFile f;
    f.findings = std::move(findings);
    std::vector<PropDiagnostic> diags;
    std::unordered_set<std::string> names;
    while (peek().kind != Tok::End) {
      try {
        statement(f, names);
      } catch (const PropDiagnostic& d) {
        diags.push_back(d);
        while (peek().kind != Tok::End && !is(";")) ++pos_;
        if (is(";")) ++pos_;
      }
    }
    if (!diags.empty()) throw PropError(std::move(diags));
    return f;
  }

  BExprPtr lone_expr() {
    try {
      auto e = expr();
      if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
      return e;
    } catch (const PropDiagnostic& d) {
      throw PropError({d});
    }
  }

 private:
  const Token& peek() const { return t_[pos_]; }
  bool is(const char* p) const { return peek().kind == Tok::Punct && peek().text == p; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw PropDiagnostic{peek().line, peek().col, msg};
  }
  void expect(const char* p) {
    if (!is(p)) fail(std::string("expected '") + p + "'" + found());
    ++pos_;
  }
  std::string found() const {
    if (peek().kind == Tok::End) return " at end of input";
    return ", found '" + peek().text + "'";
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident || peek().text[0] == '$') fail(std::string("expected ") + what + found());
    return t_[pos_++].text;
  }
  std::uint64_t integer(const char* what) {
    if (peek().kind != Tok::Int) fail(std::string("expected ") + what + found());
    return t_[pos_++].value;
  }

  void statement(PropFile& f, std::unordered_set<std::string>& names) {
    const Token& kw = peek();
    if (kw.kind != Tok::Ident) fail("expected 'prop', 'assume' or 'flag'" + found());
    const std::string k = kw.text;
    const int line = kw.line;
    if (k != "prop" && k != "assume" && k != "flag") fail("unknown statement '" + k + "'");
    ++pos_;
    const Token name_tok = peek();
    const std::string name = ident("a name");
    if (!names.insert(name).second)
      throw PropDiagnostic{name_tok.line, name_tok.col, "duplicate name '" + name + "'"};
    expect(":");
    if (k == "assume" || k == "flag") {
      auto e = expr();
      expect(";");
      if (k == "assume")
        f.assumes.push_back({name, e});
      else
        f.flags.push_back({name, e});
      return;
    }
    Property p;
    p.name = name;
    p.line = line;
    const Token seq_tok = peek();
    Sequence ant = sequence();
    if (is("|->") || is("|=>")) {
      if (ant.items[0].delay != 0)
        throw PropDiagnostic{seq_tok.line, seq_tok.col, "an antecedent cannot start with a delay"};
      p.kind = is("|->") ? Property::Kind::Overlapped : Property::Kind::NonOverlapped;
      ++pos_;
      p.antecedent = std::move(ant);
      p.consequent = sequence();
    } else {
      if (ant.items.size() != 1 || ant.items[0].delay != 0)
        fail("a sequence needs '|->' or '|=>'" + found());
      p.kind = Property::Kind::Invariant;
      p.invariant = ant.items[0].expr;
    }
    expect(";");
    f.props.push_back(std::move(p));
  }

  Sequence sequence() {
    Sequence s;
    unsigned delay = 0;
    if (is("##")) {
      ++pos_;
      delay = static_cast<unsigned>(integer("a delay"));
    }
    s.items.push_back({delay, expr()});
    while (is("##")) {
      ++pos_;
      const auto d = static_cast<unsigned>(integer("a delay"));
      s.items.push_back({d, expr()});
    }
    return s;
  }

  BExprPtr expr() {
    auto e = conj();
    while (is("||")) {
      ++pos_;
      e = make_or(e, conj());
    }
    return e;
  }
  BExprPtr conj() {
    auto e = cmp();
    while (is("&&")) {
      ++pos_;
      e = make_and(e, cmp());
    }
    return e;
  }
  BExprPtr cmp() {
    auto e = unary();
    if (is("==") || is("!=")) {
      const bool eq = is("==");
      ++pos_;
      auto r = unary();
      e = eq ? make_eq(e, r) : make_neq(e, r);
      if (is("==") || is("!=")) fail("comparisons do not chain; add parentheses");
    }
    return e;
  }
  BExprPtr unary() {
    if (is("!")) {
      ++pos_;
      return make_not(unary());
    }
    return primary();
  }
  BExprPtr primary() {
    if (is("(")) {
      ++pos_;
      auto e = expr();
      expect(")");
      return e;
    }
    if (peek().kind == Tok::Int) return make_const(t_[pos_++].value);
    if (peek().kind != Tok::Ident) fail("expected expression" + found());
    const Token& id = t_[pos_];
    if (id.text == "$past") {
      ++pos_;
      expect("(");
      auto e = expr();
      unsigned n = 1;
      if (is(",")) {
        ++pos_;
        const Token& nt = peek();
        const std::uint64_t v = integer("a cycle count");
        if (v < 1) throw PropDiagnostic{nt.line, nt.col, "$past depth must be at least 1"};
        if (v > 1'000'000) throw PropDiagnostic{nt.line, nt.col, "$past depth too large"};
        n = static_cast<unsigned>(v);
      }
      expect(")");
      return make_past(e, n);
    }
    if (id.text == "$stable") {
      ++pos_;
      expect("(");
      auto e = expr();
      expect(")");
      return make_stable(e);
    }
    if (id.text[0] == '$') fail("unknown system function '" + id.text + "'");
    const std::string name = t_[pos_++].text;
    std::optional<std::pair<unsigned, unsigned>> range;
    if (is("[")) {
      ++pos_;
      const auto hi = static_cast<unsigned>(integer("a bit index"));
      unsigned lo = hi;
      if (is(":")) {
        ++pos_;
        lo = static_cast<unsigned>(integer("a bit index"));
      }
      if (lo > hi) fail("bit range must be [hi:lo] with hi >= lo");
      expect("]");
      range = std::make_pair(hi, lo);
    }
    return make_ref(name, range);
  }

  std::vector<Token> t_;
  std::size_t pos_ = 0;
};

int prec(const BExpr& e) {
  switch (e.kind) {
    case BExpr::Kind::Or: return 1;
    case BExpr::Kind::And: return 2;
    case BExpr::Kind::Eq:
    case BExpr::Kind::Neq: return 3;
    case BExpr::Kind::Not: return 4;
    default: return 5;
  }
}

void print(std::ostream& os, const BExpr& e, int min_prec) {
  const bool paren = prec(e) < min_prec;
  if (paren) os << '(';
  switch (e.kind) {
    case BExpr::Kind::Const: os << e.value; break;
    case BExpr::Kind::Ref:
      os << e.name;
      if (e.range) {
        os << '[' << e.range->first;
        if (e.range->second != e.range->first) os << ':' << e.range->second;
        os << ']';
      }
      break;
    case BExpr::Kind::Past:
      os << "$past(";
      print(os, *e.args[0], 0);
      os << ", " << e.depth << ')';
      break;
    case BExpr::Kind::Stable:
      os << "$stable(";
      print(os, *e.args[0], 0);
      os << ')';
      break;
    case BExpr::Kind::Not:
      os << '!';
      print(os, *e.args[0], 4);
      break;
    case BExpr::Kind::And:
      print(os, *e.args[0], 2);
      os << " && ";
      print(os, *e.args[1], 3);
      break;
    case BExpr::Kind::Or:
      print(os, *e.args[0], 1);
      os << " || ";
      print(os, *e.args[1], 2);
      break;
    case BExpr::Kind::Eq:
    case BExpr::Kind::Neq:
      print(os, *e.args[0], 4);
      os << (e.kind == BExpr::Kind::Eq ? " == " : " != ");
      print(os, *e.args[1], 4);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

PropFile parse_props(std::string_view text) {
  Lexed lx = lex(text);
  return Parser(std::move(lx.tokens)).file(std::move(lx.findings));
}

BExprPtr parse_bexpr(std::string_view text) {
  Lexed lx = lex(text);
  return Parser(std::move(lx.tokens)).lone_expr();
}

std::string to_string(const BExprPtr& e) {
  std::ostringstream os;
  print(os, *e, 0);
  return os.str();
}

std::string to_string(const Sequence& s) {
  std::ostringstream os;
  const bool multi = s.items.size() > 1 || (s.items.size() == 1 && s.items[0].delay > 0);
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    const auto& it = s.items[i];
    if (i > 0) os << ' ';
    if (i > 0 || it.delay > 0) os << "##" << it.delay << ' ';
    // Parenthesize connectives inside multi-item sequences for readability.
    print(os, *it.expr, multi ? 3 : 0);
  }
  return os.str();
}

std::string print_property(const Property& p) {
  std::ostringstream os;
  os << "prop " << p.name << " : ";
  if (p.kind == Property::Kind::Invariant) {
    os << to_string(p.invariant);
  } else {
    os << to_string(p.antecedent) << (p.kind == Property::Kind::Overlapped ? " |-> " : " |=> ")
       << to_string(p.consequent);
  }
  os << " ;";
  return os.str();
}

std::string print_props(const PropFile& f) {
  std::ostringstream os;
  for (const auto& fl : f.flags) os << "flag " << fl.name << " : " << to_string(fl.expr) << " ;\n";
  for (const auto& a : f.assumes) os << "assume " << a.name << " : " << to_string(a.expr) << " ;\n";
  for (const auto& p : f.props) os << print_property(p) << '\n';
  for (const auto& x : f.findings) os << "# FINDING " << x.name << ": " << x.message << '\n';
  return os.str();
}

}  // namespace formalign::props
