#include "formalign/specgen/regmap.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "formalign/specgen/text.hpp"

namespace formalign::specgen {

std::string_view access_name(Access a) {
  switch (a) {
    case Access::RW: return "RW";
    case Access::RO: return "RO";
    case Access::WO: return "WO";
    case Access::W1C: return "W1C";
  }
  return "?";
}

std::optional<Access> parse_access(std::string_view token) {
  for (Access a : {Access::RW, Access::RO, Access::WO, Access::W1C})
    if (token == access_name(a)) return a;
  return std::nullopt;
}

const RegisterDef* RegisterMap::find(const std::string& name) const {
  for (const auto& r : registers)
    if (r.name == name) return &r;
  return nullptr;
}

RegisterMap parse_regmap_csv(std::string_view text, unsigned reg_width) {
  RegisterMap map;
  map.width = reg_width;
  const auto lines = csv_lines(text);
  if (lines.empty()) throw SpecError("empty register map");
  const std::vector<std::string> header = {"reg", "addr", "field", "msb", "lsb", "access", "reset"};
  if (lines[0].cells != header)
    throw SpecError("expected header reg,addr,field,msb,lsb,access,reset", lines[0].row);

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [row, c] = lines[i];
    if (c.size() != header.size())
      throw SpecError("expected 7 columns, got " + std::to_string(c.size()), row);
    Field f;
    f.row = row;
    f.name = c[2];
    if (c[0].empty() || f.name.empty()) throw SpecError("empty register or field name", row);
    if (!is_identifier(c[0]) || !is_identifier(f.name))
      throw SpecError("register and field names must be identifiers", row);
    const std::uint64_t addr = parse_number(c[1], row, "addr");
    f.msb = static_cast<unsigned>(parse_number(c[3], row, "msb"));
    f.lsb = static_cast<unsigned>(parse_number(c[4], row, "lsb"));
    auto acc = parse_access(c[5]);
    if (!acc)
      throw SpecError("unsupported access policy '" + c[5] +
                          "' (custom register schemes are not supported; expected RW, RO, WO or W1C)",
                      row);
    f.access = *acc;
    f.reset = parse_number(c[6], row, "reset");
    if (f.msb < f.lsb) throw SpecError("field " + f.name + ": msb below lsb", row);
    if (f.msb >= reg_width)
      throw SpecError("field " + f.name + " [" + std::to_string(f.msb) + ":" + std::to_string(f.lsb) +
                          "] outside the " + std::to_string(reg_width) + "-bit register",
                      row);
    if (f.width() < 64 && f.reset >> f.width())
      throw SpecError("reset value " + c[6] + " does not fit field " + f.name + " (" +
                          std::to_string(f.width()) + " bits)",
                      row);

    auto it = std::find_if(map.registers.begin(), map.registers.end(),
                           [&](const RegisterDef& r) { return r.name == c[0]; });
    if (it == map.registers.end()) {
      for (const auto& r : map.registers)
        if (r.address == addr)
          throw SpecError("address " + c[1] + " already used by register " + r.name, row);
      map.registers.push_back({c[0], addr, {}});
      it = std::prev(map.registers.end());
    } else if (it->address != addr) {
      throw SpecError("register " + it->name + " given two addresses", row);
    }
    for (const auto& g : it->fields) {
      if (g.name == f.name) throw SpecError("duplicate field " + it->name + "." + f.name, row);
      if (f.lsb <= g.msb && g.lsb <= f.msb)
        throw SpecError("field " + it->name + "." + f.name + " [" + std::to_string(f.msb) + ":" +
                            std::to_string(f.lsb) + "] overlaps " + it->name + "." + g.name + " [" +
                            std::to_string(g.msb) + ":" + std::to_string(g.lsb) + "] (row " +
                            std::to_string(g.row) + ")",
                        row);
    }
    it->fields.push_back(f);
  }
  return map;
}

std::string print_regmap_csv(const RegisterMap& map) {
  std::ostringstream out;
  out << "reg,addr,field,msb,lsb,access,reset\n";
  for (const auto& r : map.registers)
    for (const auto& f : r.fields)
      out << r.name << ',' << hex(r.address) << ',' << f.name << ',' << f.msb << ',' << f.lsb << ','
          << access_name(f.access) << ',' << hex(f.reset) << '\n';
  return out.str();
}

BusBinding parse_binding(std::string_view text) {
  BusBinding b;
  std::map<std::string, std::string*> slots = {
      {"wr", &b.wr}, {"rd", &b.rd}, {"addr", &b.addr}, {"wdata", &b.wdata}, {"rdata", &b.rdata}};
  int row = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw SpecError("expected key=value", row);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw SpecError("empty value for " + key, row);
    if (key == "assume") {
      b.assumes.push_back(value);
    } else if (key == "data_width") {
      b.data_width = static_cast<unsigned>(parse_number(value, row, "data_width"));
    } else if (auto it = slots.find(key); it != slots.end()) {
      if (!it->second->empty()) throw SpecError("duplicate key " + key, row);
      *it->second = value;
    } else {
      throw SpecError("unknown key " + key, row);
    }
  }
  for (const auto& [k, v] : slots)
    if (v->empty()) throw SpecError("binding lacks " + k);
  return b;
}

std::string print_binding(const BusBinding& b) {
  std::ostringstream out;
  out << "wr=" << b.wr << "\nrd=" << b.rd << "\naddr=" << b.addr << "\nwdata=" << b.wdata
      << "\nrdata=" << b.rdata << '\n';
  if (b.data_width) out << "data_width=" << b.data_width << '\n';
  for (const auto& a : b.assumes) out << "assume=" << a << '\n';
  return out.str();
}

BusBinding resolve_binding(const ir::TransitionSystem& ts, BusBinding b) {
  auto width = [&](const std::string& key, const std::string& name) {
    auto info = ts.find(name);
    if (!info || info->kind == ir::SignalKind::Assumption)
      throw SpecError("binding " + key + "=" + name + " does not name a design signal");
    return info->width;
  };
  for (const auto& [k, n] : {std::pair{"wr", &b.wr}, std::pair{"rd", &b.rd}})
    if (width(k, *n) != 1) throw SpecError(std::string("binding ") + k + " must be 1 bit");
  width("addr", b.addr);
  const unsigned wd = width("wdata", b.wdata);
  const unsigned rd = width("rdata", b.rdata);
  if (wd != rd)
    throw SpecError("wdata and rdata widths differ (" + std::to_string(wd) + " vs " + std::to_string(rd) + ")");
  if (b.data_width && b.data_width != rd)
    throw SpecError("data_width " + std::to_string(b.data_width) + " but rdata is " + std::to_string(rd) + " bits");
  b.data_width = rd;
  return b;
}

unsigned csr_checks_per_field(Access a) {
  switch (a) {
    case Access::RW: return 2;
    case Access::RO: return 2;
    case Access::WO: return 1;
    case Access::W1C: return 3;
  }
  return 0;
}

std::string gen_csr_props(const RegisterMap& map, const BusBinding& b) {
  if (b.data_width == 0) throw SpecError("bus data width unknown; resolve the binding first");
  std::ostringstream out;
  out << "# register checks\n";
  for (std::size_t i = 0; i < b.assumes.size(); ++i)
    out << "assume csr_env_" << i << " : " << b.assumes[i] << " ;\n";

  for (const auto& r : map.registers) {
    for (const auto& f : r.fields)
      if (f.msb >= b.data_width)
        throw SpecError("field " + r.name + "." + f.name + " wider than the " +
                            std::to_string(b.data_width) + "-bit data bus",
                        f.row);
    const std::string at = b.addr + " == " + hex(r.address);
    const std::string wr = b.wr + " && " + at;
    const std::string rd = b.rd + " && " + at;
    const std::string rd_only = rd + " && !" + b.wr;
    const std::string seen = "csr_wr_seen_" + r.name;
    const bool needs_flag = std::any_of(r.fields.begin(), r.fields.end(),
                                        [](const Field& f) { return f.access != Access::WO; });
    out << "\n# " << r.name << " @ " << hex(r.address) << '\n';
    if (needs_flag) out << "flag " << seen << " : " << wr << " ;\n";

    for (const auto& f : r.fields) {
      const std::string sel = select(f.msb, f.lsb);
      const std::string rdata = b.rdata + sel;
      const std::string wdata = b.wdata + sel;
      const std::string base = "csr_" + r.name + "_" + f.name;
      if (f.access != Access::WO)
        out << "prop " << base << "_reset : " << rd << " && !" << seen << " |-> " << rdata
            << " == " << hex(f.reset) << " ;\n";
      switch (f.access) {
        case Access::RW:
          out << "prop " << base << "_rw : (" << wr << ") ##1 (" << rd_only << ") |-> " << rdata
              << " == $past(" << wdata << ", 1) ;\n";
          break;
        case Access::RO:
          out << "prop " << base << "_ro : (" << rd << ") ##1 (" << wr << ") ##1 (" << rd_only
              << ") |-> " << rdata << " == $past(" << rdata << ", 2) ;\n";
          break;
        case Access::WO:
          out << "prop " << base << "_wo : (" << wr << ") ##1 (" << rd_only << ") |-> " << rdata
              << " == 0 ;\n";
          break;
        case Access::W1C: {
          const std::uint64_t ones = ir::width_mask(f.width());
          out << "prop " << base << "_w1c_clear : (" << wr << " && " << wdata << " == " << hex(ones)
              << ") ##1 (" << rd_only << ") |-> " << rdata << " == 0 ;\n";
          out << "prop " << base << "_w1c_hold : (" << rd_only << ") ##1 (" << wr << " && " << wdata
              << " == 0) ##1 (" << rd_only << ") |-> " << rdata << " == $past(" << rdata
              << ", 2) ;\n";
          break;
        }
      }
    }
  }
  return out.str();
}

}  // namespace formalign::specgen
