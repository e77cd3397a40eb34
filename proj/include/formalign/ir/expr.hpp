#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace formalign::ir {

/// Widths are limited to a machine word; every value lives in a uint64_t.
inline constexpr unsigned kMaxWidth = 64;

enum class Op : std::uint8_t {
  Const,
  Var,
  Not,
  And,
  Or,
  Xor,
  Eq,
  Neq,
  Ult,
  Add,
  Sub,
  Mux,
  Slice,
  Concat,
  Zext,
  RedOr,
  RedAnd,
};

std::string_view op_name(Op op);

/// Distinct diagnostic codes shared by the IR parser, validator and builders.
enum class DiagCode {
  Syntax,
  WidthMismatch,
  DuplicateName,
  MissingNext,
  CombinationalCycle,
  UnknownName,
  BadRange,
};

std::string_view diag_code_name(DiagCode code);

class IrError : public std::runtime_error {
 public:
  IrError(DiagCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  DiagCode code() const { return code_; }

 private:
  DiagCode code_;
};

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

/// One node of the width-annotated bit-vector expression DAG. Nodes are
/// immutable; sharing a subexpression is sharing the pointer.
class ExprNode {
 public:
  Op op() const { return op_; }
  unsigned width() const { return width_; }
  const std::vector<Expr>& args() const { return args_; }
  const Expr& arg(std::size_t i) const { return args_.at(i); }

  // Const payload.
  std::uint64_t value() const { return value_; }
  // Var payload.
  const std::string& name() const { return name_; }
  // Slice payload.
  unsigned hi() const { return hi_; }
  unsigned lo() const { return lo_; }

 private:
  friend struct ExprFactory;
  ExprNode() = default;

  Op op_ = Op::Const;
  unsigned width_ = 1;
  std::vector<Expr> args_;
  std::uint64_t value_ = 0;
  std::string name_;
  unsigned hi_ = 0;
  unsigned lo_ = 0;
};

inline std::uint64_t width_mask(unsigned width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

// Builders. Each checks the width rules and throws IrError(WidthMismatch) on
// violation.
Expr constant(unsigned width, std::uint64_t value);
Expr var(std::string name, unsigned width);
Expr bnot(Expr a);
Expr band(Expr a, Expr b);
Expr bor(Expr a, Expr b);
Expr bxor(Expr a, Expr b);
Expr eq(Expr a, Expr b);
Expr neq(Expr a, Expr b);
Expr ult(Expr a, Expr b);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mux(Expr cond, Expr then_e, Expr else_e);
Expr slice(Expr a, unsigned hi, unsigned lo);
Expr concat(Expr hi_part, Expr lo_part);
Expr zext(Expr a, unsigned width);
Expr redor(Expr a);
Expr redand(Expr a);

// Convenience for 1-bit logic.
Expr bit_and(std::initializer_list<Expr> terms);
Expr bit_or(std::initializer_list<Expr> terms);

/// Generic builder used by parsers: `params` carries the numeric operands of
/// const/slice/zext.
Expr make(Op op, std::vector<Expr> args, std::vector<std::uint64_t> params = {});

/// Evaluates `e` given a lookup for variables. Results are masked to width.
template <typename Lookup>
std::uint64_t evaluate(const Expr& e, Lookup&& lookup);

/// Names referenced by `e` (deduplicated, first-occurrence order).
std::vector<std::string> support(const Expr& e);

/// Rewrites every var node whose name maps through `rename`.
template <typename Fn>
Expr substitute(const Expr& e, Fn&& fn);

std::string to_sexpr(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace formalign::ir

#include "formalign/ir/expr_inl.hpp"
