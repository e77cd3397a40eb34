#include "formalign/specgen/text.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "formalign/specgen/regmap.hpp"

namespace formalign::specgen {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<CsvLine> csv_lines(std::string_view text) {
  std::vector<CsvLine> out;
  int row = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++row;
    const std::string line = trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line[0] == '#') continue;
    CsvLine l{row, {}};
    std::size_t i = 0;
    for (;;) {
      std::string cell;
      while (i < line.size() && line[i] == ' ') ++i;
      if (i < line.size() && line[i] == '"') {
        ++i;
        for (;;) {
          if (i >= line.size()) throw SpecError("unterminated quote", row);
          if (line[i] == '"') {
            if (i + 1 < line.size() && line[i + 1] == '"') {
              cell += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          cell += line[i++];
        }
        const std::size_t comma = line.find(',', i);
        if (!trim(std::string_view(line).substr(i, comma - i)).empty())
          throw SpecError("text after closing quote", row);
        i = comma;
      } else {
        const std::size_t comma = line.find(',', i);
        cell = trim(std::string_view(line).substr(i, comma - i));
        i = comma;
      }
      l.cells.push_back(cell);
      if (i == std::string::npos) break;
      ++i;
    }
    out.push_back(std::move(l));
  }
  return out;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::uint64_t parse_number(const std::string& s, int row, const std::string& what) {
  std::string_view v = s;
  int base = 10;
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) {
    v.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw SpecError("bad number '" + s + "' for " + what, row);
  return out;
}

std::string hex(std::uint64_t v) {
  std::ostringstream o;
  o << "0x" << std::hex << std::uppercase << v;
  return o.str();
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string select(unsigned hi, unsigned lo) {
  if (hi == lo) return "[" + std::to_string(hi) + "]";
  return "[" + std::to_string(hi) + ":" + std::to_string(lo) + "]";
}

}  // namespace formalign::specgen
