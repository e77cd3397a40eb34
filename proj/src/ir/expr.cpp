#include "formalign/ir/expr.hpp"

#include <sstream>
#include <unordered_set>

namespace formalign::ir {

std::string_view op_name(Op op) {
  switch (op) {
    case Op::Const: return "const";
    case Op::Var: return "var";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Xor: return "xor";
    case Op::Eq: return "eq";
    case Op::Neq: return "neq";
    case Op::Ult: return "ult";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mux: return "mux";
    case Op::Slice: return "slice";
    case Op::Concat: return "concat";
    case Op::Zext: return "zext";
    case Op::RedOr: return "redor";
    case Op::RedAnd: return "redand";
  }
  return "?";
}

std::string_view diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::Syntax: return "E-SYNTAX";
    case DiagCode::WidthMismatch: return "E-WIDTH";
    case DiagCode::DuplicateName: return "E-DUPLICATE";
    case DiagCode::MissingNext: return "E-MISSING-NEXT";
    case DiagCode::CombinationalCycle: return "E-COMB-CYCLE";
    case DiagCode::UnknownName: return "E-UNKNOWN-NAME";
    case DiagCode::BadRange: return "E-BAD-RANGE";
  }
  return "E-?";
}

struct ExprFactory {
  static Expr node(Op op, unsigned width, std::vector<Expr> args) {
    auto* n = new ExprNode();
    n->op_ = op;
    n->width_ = width;
    n->args_ = std::move(args);
    return Expr(n);
  }
  static Expr constant(unsigned width, std::uint64_t value) {
    auto* n = new ExprNode();
    n->op_ = Op::Const;
    n->width_ = width;
    n->value_ = value;
    return Expr(n);
  }
  static Expr var(std::string name, unsigned width) {
    auto* n = new ExprNode();
    n->op_ = Op::Var;
    n->width_ = width;
    n->name_ = std::move(name);
    return Expr(n);
  }
  static Expr slice(Expr a, unsigned hi, unsigned lo) {
    auto* n = new ExprNode();
    n->op_ = Op::Slice;
    n->width_ = hi - lo + 1;
    n->hi_ = hi;
    n->lo_ = lo;
    n->args_ = {std::move(a)};
    return Expr(n);
  }
};

namespace {

[[noreturn]] void width_error(const std::string& msg) {
  throw IrError(DiagCode::WidthMismatch, msg);
}

void check_width(unsigned w, std::string_view what) {
  if (w == 0 || w > kMaxWidth) {
    width_error(std::string(what) + ": width " + std::to_string(w) +
                " outside 1.." + std::to_string(kMaxWidth));
  }
}

void require(const Expr& e) {
  if (!e) throw std::invalid_argument("null expression operand");
}

void same_width(Op op, const Expr& a, const Expr& b) {
  require(a);
  require(b);
  if (a->width() != b->width()) {
    std::ostringstream os;
    os << op_name(op) << " operands have widths " << a->width() << " and "
       << b->width();
    width_error(os.str());
  }
}

Expr binary(Op op, Expr a, Expr b, bool bool_result) {
  same_width(op, a, b);
  const unsigned w = bool_result ? 1 : a->width();
  return ExprFactory::node(op, w, {std::move(a), std::move(b)});
}

}  // namespace

Expr constant(unsigned width, std::uint64_t value) {
  check_width(width, "const");
  if ((value & ~width_mask(width)) != 0) {
    width_error("const value " + std::to_string(value) + " does not fit in " +
                std::to_string(width) + " bits");
  }
  return ExprFactory::constant(width, value);
}

Expr var(std::string name, unsigned width) {
  check_width(width, "var " + name);
  return ExprFactory::var(std::move(name), width);
}

Expr bnot(Expr a) {
  require(a);
  const unsigned w = a->width();
  return ExprFactory::node(Op::Not, w, {std::move(a)});
}

Expr band(Expr a, Expr b) { return binary(Op::And, std::move(a), std::move(b), false); }
Expr bor(Expr a, Expr b) { return binary(Op::Or, std::move(a), std::move(b), false); }
Expr bxor(Expr a, Expr b) { return binary(Op::Xor, std::move(a), std::move(b), false); }
Expr eq(Expr a, Expr b) { return binary(Op::Eq, std::move(a), std::move(b), true); }
Expr neq(Expr a, Expr b) { return binary(Op::Neq, std::move(a), std::move(b), true); }
Expr ult(Expr a, Expr b) { return binary(Op::Ult, std::move(a), std::move(b), true); }
Expr add(Expr a, Expr b) { return binary(Op::Add, std::move(a), std::move(b), false); }
Expr sub(Expr a, Expr b) { return binary(Op::Sub, std::move(a), std::move(b), false); }

Expr mux(Expr cond, Expr then_e, Expr else_e) {
  require(cond);
  if (cond->width() != 1) {
    width_error("mux condition has width " + std::to_string(cond->width()) +
                ", expected 1");
  }
  same_width(Op::Mux, then_e, else_e);
  const unsigned w = then_e->width();
  return ExprFactory::node(Op::Mux, w,
                           {std::move(cond), std::move(then_e), std::move(else_e)});
}

Expr slice(Expr a, unsigned hi, unsigned lo) {
  require(a);
  if (lo > hi || hi >= a->width()) {
    std::ostringstream os;
    os << "slice bounds [" << hi << ":" << lo << "] invalid for width "
       << a->width();
    width_error(os.str());
  }
  if (lo == 0 && hi + 1 == a->width()) return a;
  return ExprFactory::slice(std::move(a), hi, lo);
}

Expr concat(Expr hi_part, Expr lo_part) {
  require(hi_part);
  require(lo_part);
  const unsigned w = hi_part->width() + lo_part->width();
  check_width(w, "concat");
  return ExprFactory::node(Op::Concat, w, {std::move(hi_part), std::move(lo_part)});
}

Expr zext(Expr a, unsigned width) {
  require(a);
  check_width(width, "zext");
  if (width < a->width()) {
    width_error("zext to " + std::to_string(width) + " narrower than operand width " +
                std::to_string(a->width()));
  }
  if (width == a->width()) return a;
  return ExprFactory::node(Op::Zext, width, {std::move(a)});
}

Expr redor(Expr a) {
  require(a);
  if (a->width() == 1) return a;
  return ExprFactory::node(Op::RedOr, 1, {std::move(a)});
}

Expr redand(Expr a) {
  require(a);
  if (a->width() == 1) return a;
  return ExprFactory::node(Op::RedAnd, 1, {std::move(a)});
}

Expr bit_and(std::initializer_list<Expr> terms) {
  Expr acc;
  for (const auto& t : terms) acc = acc ? band(acc, t) : t;
  return acc ? acc : constant(1, 1);
}

Expr bit_or(std::initializer_list<Expr> terms) {
  Expr acc;
  for (const auto& t : terms) acc = acc ? bor(acc, t) : t;
  return acc ? acc : constant(1, 0);
}

Expr make(Op op, std::vector<Expr> args, std::vector<std::uint64_t> params) {
  auto need = [&](std::size_t n_args, std::size_t n_params) {
    if (args.size() != n_args || params.size() != n_params) {
      throw IrError(DiagCode::Syntax, std::string(op_name(op)) + " expects " +
                                          std::to_string(n_args) + " operand(s)");
    }
  };
  switch (op) {
    case Op::Const:
      need(0, 2);
      return constant(static_cast<unsigned>(params[0]), params[1]);
    case Op::Var:
      throw std::invalid_argument("make(): use var() for variables");
    case Op::Not: need(1, 0); return bnot(args[0]);
    case Op::And: need(2, 0); return band(args[0], args[1]);
    case Op::Or: need(2, 0); return bor(args[0], args[1]);
    case Op::Xor: need(2, 0); return bxor(args[0], args[1]);
    case Op::Eq: need(2, 0); return eq(args[0], args[1]);
    case Op::Neq: need(2, 0); return neq(args[0], args[1]);
    case Op::Ult: need(2, 0); return ult(args[0], args[1]);
    case Op::Add: need(2, 0); return add(args[0], args[1]);
    case Op::Sub: need(2, 0); return sub(args[0], args[1]);
    case Op::Mux: need(3, 0); return mux(args[0], args[1], args[2]);
    case Op::Slice:
      need(1, 2);
      return slice(args[0], static_cast<unsigned>(params[0]),
                   static_cast<unsigned>(params[1]));
    case Op::Concat: need(2, 0); return concat(args[0], args[1]);
    case Op::Zext: need(1, 1); return zext(args[0], static_cast<unsigned>(params[0]));
    case Op::RedOr: need(1, 0); return redor(args[0]);
    case Op::RedAnd: need(1, 0); return redand(args[0]);
  }
  throw std::invalid_argument("make(): unknown op");
}

std::vector<std::string> support(const Expr& e) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::unordered_set<const ExprNode*> visited;
  std::vector<const ExprNode*> stack{e.get()};
  while (!stack.empty()) {
    const ExprNode* n = stack.back();
    stack.pop_back();
    if (!visited.insert(n).second) continue;
    if (n->op() == Op::Var) {
      if (seen.insert(n->name()).second) out.push_back(n->name());
      continue;
    }
    for (auto it = n->args().rbegin(); it != n->args().rend(); ++it) stack.push_back(it->get());
  }
  return out;
}

namespace {

void print(std::ostream& os, const ExprNode& n) {
  switch (n.op()) {
    case Op::Const:
      os << "(const " << n.width() << ' ' << n.value() << ')';
      return;
    case Op::Var:
      os << n.name();
      return;
    case Op::Slice:
      os << "(slice ";
      print(os, *n.arg(0));
      os << ' ' << n.hi() << ' ' << n.lo() << ')';
      return;
    case Op::Zext:
      os << "(zext ";
      print(os, *n.arg(0));
      os << ' ' << n.width() << ')';
      return;
    default:
      os << '(' << op_name(n.op());
      for (const auto& a : n.args()) {
        os << ' ';
        print(os, *a);
      }
      os << ')';
  }
}

}  // namespace

std::string to_sexpr(const Expr& e) {
  std::ostringstream os;
  print(os, *e);
  return os.str();
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op() != b->op() || a->width() != b->width() ||
      a->args().size() != b->args().size()) {
    return false;
  }
  switch (a->op()) {
    case Op::Const:
      if (a->value() != b->value()) return false;
      break;
    case Op::Var:
      if (a->name() != b->name()) return false;
      break;
    case Op::Slice:
      if (a->hi() != b->hi() || a->lo() != b->lo()) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a->args().size(); ++i) {
    if (!structurally_equal(a->arg(i), b->arg(i))) return false;
  }
  return true;
}

}  // namespace formalign::ir
