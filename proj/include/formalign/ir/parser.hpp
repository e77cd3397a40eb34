#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::ir {

/// Either a well-formed system or every diagnostic found. Never both.
struct ParseResult {
  std::optional<TransitionSystem> system;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return system.has_value(); }
  const TransitionSystem& value() const;
  std::string error_text() const;
};

ParseResult parse_ir(std::string_view text);

/// Throws IrError with the first diagnostic when parsing fails.
TransitionSystem parse_ir_or_throw(std::string_view text);

/// Canonical text form; parse_ir(print_ir(ts)) reproduces `ts`.
std::string print_ir(const TransitionSystem& ts);

/// Parses a single S-expression against the signals of `ts`.
Expr parse_sexpr(std::string_view text, const TransitionSystem& ts);

/// Parses an unsigned literal: decimal or 0x-prefixed hex.
std::optional<std::uint64_t> parse_uint(std::string_view text);

}  // namespace formalign::ir
