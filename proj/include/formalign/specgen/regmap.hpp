#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formalign/ir/transition_system.hpp"

namespace formalign::specgen {

/// Generator input errors. `row` is the 1-based line of the offending input
/// row when there is one.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& what, int row = 0)
      : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
  int row() const { return row_; }

 private:
  int row_;
};

enum class Access { RW, RO, WO, W1C };

std::string_view access_name(Access a);
std::optional<Access> parse_access(std::string_view token);

struct Field {
  std::string name;
  unsigned msb = 0;
  unsigned lsb = 0;
  Access access = Access::RW;
  std::uint64_t reset = 0;
  int row = 0;

  unsigned width() const { return msb - lsb + 1; }
};

struct RegisterDef {
  std::string name;
  std::uint64_t address = 0;
  std::vector<Field> fields;
};

struct RegisterMap {
  unsigned width = 32;  // register width every field must fit in
  std::vector<RegisterDef> registers;

  const RegisterDef* find(const std::string& name) const;
};

/// Header `reg,addr,field,msb,lsb,access,reset`; numbers decimal or 0x hex.
/// Rows of one register must agree on its address. Blank lines and `#`
/// comment lines are skipped.
RegisterMap parse_regmap_csv(std::string_view text, unsigned reg_width = 32);

/// Inverse of parse_regmap_csv.
std::string print_regmap_csv(const RegisterMap& map);

/// Bus signals the register checks are phrased over, read from `key=value`
/// lines. `assume` lines are optional environment constraints in property
/// syntax, emitted as assumptions next to the checks.
struct BusBinding {
  std::string wr, rd, addr, wdata, rdata;
  unsigned data_width = 0;  // 0: take the width of `rdata` from the design
  std::vector<std::string> assumes;
};

BusBinding parse_binding(std::string_view text);
std::string print_binding(const BusBinding& b);

/// Checks that the bound names exist in `ts` with consistent widths and fills
/// in data_width when it is 0.
BusBinding resolve_binding(const ir::TransitionSystem& ts, BusBinding b);

/// Number of checks one field of the given policy yields.
unsigned csr_checks_per_field(Access a);

/// Register checks as property text: reset value, write-read, read-only
/// stability, write-only read-as-zero and write-one-to-clear behaviour.
/// Requires a nonzero bus data width.
std::string gen_csr_props(const RegisterMap& map, const BusBinding& bind);

}  // namespace formalign::specgen
