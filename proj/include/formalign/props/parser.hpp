#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formalign/props/ast.hpp"

namespace formalign::props {

struct PropDiagnostic {
  int line = 0;
  int col = 0;
  std::string message;

  std::string to_string() const;
};

class PropError : public std::runtime_error {
 public:
  explicit PropError(std::vector<PropDiagnostic> diags);
  const std::vector<PropDiagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<PropDiagnostic> diags_;
};

/// Parses a whole property file; throws PropError listing every bad statement
/// (parsing resumes after the next ';').
PropFile parse_props(std::string_view text);

/// Parses a single expression, e.g. a connectivity condition.
BExprPtr parse_bexpr(std::string_view text);

/// Canonical text; parse_props(print_props(f)) gives back `f`.
std::string print_props(const PropFile& f);
std::string print_property(const Property& p);
std::string to_string(const BExprPtr& e);
std::string to_string(const Sequence& s);

}  // namespace formalign::props
