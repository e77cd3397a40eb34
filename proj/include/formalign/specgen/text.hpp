#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace formalign::specgen {

std::string trim(std::string_view s);

struct CsvLine {
  int row = 0;
  std::vector<std::string> cells;  // trimmed
};

/// Splits comma-separated lines, skipping blank and `#` lines. A cell may be
/// double-quoted, with `""` for a literal quote.
std::vector<CsvLine> csv_lines(std::string_view text);

/// Quotes a cell when it holds a comma or quote.
std::string csv_cell(const std::string& s);

bool is_identifier(std::string_view s);

/// Decimal or 0x-prefixed hex; throws SpecError naming `what` and `row`.
std::uint64_t parse_number(const std::string& s, int row, const std::string& what);

std::string hex(std::uint64_t v);

/// `[hi:lo]`, or `[hi]` for a single bit.
std::string select(unsigned hi, unsigned lo);

}  // namespace formalign::specgen
