#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "formalign/ir/expr.hpp"

namespace formalign::ir {

struct Port {
  std::string name;
  unsigned width = 1;
};

struct AnalogPort {
  std::string name;
  unsigned width = 1;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> range;  // inclusive, unsigned
};

struct Register {
  std::string name;
  unsigned width = 1;
  std::uint64_t init = 0;
  Expr next;  // null until assigned
};

/// A named expression: wire, output or assumption.
struct Definition {
  std::string name;
  Expr expr;
};

enum class SignalKind { Input, Analog, Register, Wire, Output, Assumption };

struct SignalInfo {
  SignalKind kind;
  unsigned width;
  std::size_t index;  // into the vector of that kind
};

struct Diagnostic {
  DiagCode code;
  std::string message;
  int line = 0;  // 0 when not from source text
  int col = 0;

  std::string to_string() const;
};

/// Synchronous transition system: I is the register init constants, T is the
/// next-state map together with the assumptions.
///
/// Plain aggregate: transformations copy and extend it. Once validated it is
/// treated as immutable and may be shared across threads.
class TransitionSystem {
 public:
  std::string name = "top";
  std::vector<Port> inputs;
  std::vector<AnalogPort> analogs;
  std::vector<Register> registers;
  std::vector<Definition> wires;
  std::vector<Definition> outputs;
  std::vector<Definition> assumptions;

  std::optional<SignalInfo> find(const std::string& name) const;
  bool has(const std::string& name) const { return find(name).has_value(); }

  /// Width of a referenceable signal; throws IrError(UnknownName) otherwise.
  unsigned width_of(const std::string& name) const;

  /// A var node for a referenceable signal (input, analog, register, wire or
  /// output).
  Expr ref(const std::string& name) const;

  Register* find_register(const std::string& name);
  const Register* find_register(const std::string& name) const;

  // Incremental construction helpers; each throws IrError on name clashes.
  void add_input(const std::string& name, unsigned width);
  void add_analog(const std::string& name, unsigned width,
                  std::optional<std::pair<std::uint64_t, std::uint64_t>> range = {});
  void add_register(const std::string& name, unsigned width, std::uint64_t init,
                    Expr next = nullptr);
  void set_next(const std::string& reg, Expr next);
  void add_wire(const std::string& name, Expr e);
  void add_output(const std::string& name, Expr e);
  void add_assumption(const std::string& name, Expr e);

  /// All structural checks: unique names, widths, one next per register,
  /// acyclic wires, 1-bit assumptions, in-range init constants.
  std::vector<Diagnostic> validate() const;

  /// validate() and throw IrError carrying the first diagnostic.
  void check() const;

  /// Wires and outputs in an order where every definition follows the
  /// definitions it reads. Requires an acyclic system.
  std::vector<const Definition*> combinational_order() const;

  std::size_t state_bits() const;
  std::size_t input_bits() const;

 private:
  void claim(const std::string& name) const;
};

}  // namespace formalign::ir
