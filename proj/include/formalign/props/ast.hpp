#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace formalign::props {

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

/// Boolean/word expression of the property language. Integer constants and
/// signal references are words; comparisons and connectives are 1 bit, with
/// multi-bit operands of connectives read as "nonzero".
struct BExpr {
  enum class Kind { Const, Ref, Past, Stable, Not, And, Or, Eq, Neq };

  Kind kind = Kind::Const;
  std::uint64_t value = 0;                              // Const
  std::string name;                                     // Ref
  std::optional<std::pair<unsigned, unsigned>> range;   // Ref: [hi:lo]
  unsigned depth = 0;                                   // Past
  std::vector<BExprPtr> args;
};

BExprPtr make_const(std::uint64_t v);
BExprPtr make_ref(std::string name, std::optional<std::pair<unsigned, unsigned>> range = {});
BExprPtr make_past(BExprPtr e, unsigned n);
BExprPtr make_stable(BExprPtr e);
BExprPtr make_not(BExprPtr e);
BExprPtr make_and(BExprPtr a, BExprPtr b);
BExprPtr make_or(BExprPtr a, BExprPtr b);
BExprPtr make_eq(BExprPtr a, BExprPtr b);
BExprPtr make_neq(BExprPtr a, BExprPtr b);

bool same(const BExprPtr& a, const BExprPtr& b);

/// Names referenced by `e`, first-occurrence order.
std::vector<std::string> references(const BExprPtr& e);

/// Largest $past depth inside `e`, counting nesting ($stable counts 1).
unsigned max_history(const BExprPtr& e);

struct SeqItem {
  unsigned delay = 0;  // cycles after the previous item (or after the start)
  BExprPtr expr;
};

/// Fixed-delay sequence: items at increasing offsets from the start cycle.
struct Sequence {
  std::vector<SeqItem> items;

  unsigned length() const;                 // offset of the last item
  std::vector<unsigned> offsets() const;   // offset of each item
};

struct Property {
  enum class Kind { Invariant, Overlapped, NonOverlapped };

  std::string name;
  Kind kind = Kind::Invariant;
  BExprPtr invariant;  // Invariant only
  Sequence antecedent;
  Sequence consequent;
  int line = 0;

  /// Cycle offset from the antecedent start to the consequent start.
  unsigned consequent_start() const {
    return antecedent.length() + (kind == Kind::NonOverlapped ? 1 : 0);
  }
};

/// `assume <name> : <expr> ;`: becomes a system assumption at bind time.
struct Assume {
  std::string name;
  BExprPtr expr;
};

/// `flag <name> : <expr> ;`: sticky, registered: true at cycle t when
/// `expr` held at some cycle before t.
struct Flag {
  std::string name;
  BExprPtr expr;
};

/// Generator findings travel inside property files as `# FINDING` comments.
struct Finding {
  std::string name;
  std::string message;
};

struct PropFile {
  std::vector<Flag> flags;
  std::vector<Assume> assumes;
  std::vector<Property> props;
  std::vector<Finding> findings;

  const Property* find(const std::string& name) const;
};

}  // namespace formalign::props
