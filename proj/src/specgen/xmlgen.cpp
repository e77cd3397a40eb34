#include "formalign/specgen/xmlgen.hpp"

#include <algorithm>
#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "formalign/specgen/text.hpp"

namespace formalign::specgen {

namespace pt = boost::property_tree;

namespace {

std::string attr(const pt::ptree& node, const std::string& element, const std::string& key) {
  auto v = node.get_optional<std::string>("<xmlattr>." + key);
  if (!v) throw SpecError("spec: <" + element + "> lacks attribute " + key);
  return trim(*v);
}

unsigned num_attr(const pt::ptree& node, const std::string& element, const std::string& key) {
  return static_cast<unsigned>(parse_number(attr(node, element, key), 0, element + "." + key));
}

void collect_vars(const pt::ptree& node, const std::string& section, SpecXml& spec) {
  if (auto attrs = node.get_child_optional("<xmlattr>"))
    for (const auto& [k, v] : *attrs) spec.vars[section + "." + k] = trim(v.data());
}

}  // namespace

SpecXml parse_spec_xml(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw SpecError(std::string("spec: malformed XML: ") + e.what());
  }
  auto root = tree.get_child_optional("spec");
  if (!root) throw SpecError("spec: root element must be <spec>");
  SpecXml spec;
  spec.name = root->get<std::string>("<xmlattr>.name", "ip");

  for (const auto& [tag, child] : *root)
    if (tag != "<xmlattr>" && tag != "<xmlcomment>" && tag != "registers" && tag != "protocol" &&
        tag != "spi" && tag != "bus" && tag != "daisy" && tag != "handshake")
      throw SpecError("spec: unexpected element <" + tag + ">");

  auto regs = root->get_child_optional("registers");
  if (!regs) throw SpecError("spec: missing <registers>");
  const unsigned data_width = num_attr(*regs, "registers", "data_width");
  std::ostringstream csv;
  csv << "reg,addr,field,msb,lsb,access,reset\n";
  for (const auto& [tag, reg] : *regs) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag != "register") throw SpecError("spec: unexpected element <" + tag + "> in <registers>");
    const std::string rname = attr(reg, "register", "name");
    const std::string addr = attr(reg, "register", "addr");
    bool any = false;
    for (const auto& [ftag, f] : reg) {
      if (ftag == "<xmlattr>" || ftag == "<xmlcomment>") continue;
      if (ftag != "field") throw SpecError("spec: unexpected element <" + ftag + "> in register " + rname);
      any = true;
      csv << rname << ',' << addr << ',' << attr(f, "field", "name") << ',' << attr(f, "field", "msb")
          << ',' << attr(f, "field", "lsb") << ',' << attr(f, "field", "access") << ','
          << attr(f, "field", "reset") << '\n';
    }
    if (!any) throw SpecError("spec: register " + rname + " has no fields");
  }
  try {
    spec.registers = parse_regmap_csv(csv.str(), data_width);
  } catch (const SpecError& e) {
    throw SpecError(std::string("spec: registers: ") + e.what());
  }

  auto proto = root->get_child_optional("protocol");
  if (!proto) throw SpecError("spec: missing <protocol>");
  spec.frame_width = num_attr(*proto, "protocol", "frame_width");
  spec.addr_bits = num_attr(*proto, "protocol", "addr_bits");
  spec.data_bits = num_attr(*proto, "protocol", "data_bits");
  spec.cpol = num_attr(*proto, "protocol", "cpol");
  spec.cpha = num_attr(*proto, "protocol", "cpha");
  spec.daisy_length = num_attr(*proto, "protocol", "daisy_length");
  if (spec.frame_width != 1 + spec.addr_bits + spec.data_bits)
    throw SpecError("spec: frame_width must be 1 + addr_bits + data_bits");
  if (spec.data_bits != data_width) throw SpecError("spec: data_bits differs from the register data_width");
  if (spec.cpol > 1 || spec.cpha > 1) throw SpecError("spec: cpol and cpha must be 0 or 1");
  if (spec.addr_bits == 0 || spec.addr_bits > 16) throw SpecError("spec: addr_bits out of range");
  for (const auto& r : spec.registers.registers)
    if (r.address >> spec.addr_bits)
      throw SpecError("spec: register " + r.name + " address does not fit addr_bits");

  for (const char* section : {"spi", "bus", "handshake"})
    if (auto n = root->get_child_optional(section)) collect_vars(*n, section, spec);
  spec.vars["spi.sample"] = spec.cpol == spec.cpha ? "1" : "0";

  if (auto d = root->get_child_optional("daisy")) {
    collect_vars(*d, "daisy", spec);
    for (const auto& [tag, st] : *d) {
      if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
      if (tag != "stage") throw SpecError("spec: unexpected element <" + tag + "> in <daisy>");
      spec.daisy_stages.push_back(attr(st, "stage", "out"));
    }
    if (spec.daisy_stages.size() != spec.daisy_length)
      throw SpecError("spec: daisy_length " + std::to_string(spec.daisy_length) + " but " +
                      std::to_string(spec.daisy_stages.size()) + " <stage> elements");
  } else if (spec.daisy_length != 0) {
    throw SpecError("spec: daisy_length given without a <daisy> section");
  }

  if (auto it = spec.vars.find("handshake.ack_delays"); it != spec.vars.end()) {
    std::istringstream in(it->second);
    std::string tok;
    while (std::getline(in, tok, ','))
      spec.ack_delays.push_back(static_cast<unsigned>(parse_number(trim(tok), 0, "handshake.ack_delays")));
    for (unsigned d : spec.ack_delays)
      if (d == 0) throw SpecError("spec: ack delays start at 1");
  }
  return spec;
}

std::string expand(std::string_view tmpl, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const std::size_t open = tmpl.find("${", i);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(i));
      break;
    }
    out.append(tmpl.substr(i, open - i));
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw SpecError("unterminated placeholder in template");
    const std::string key(tmpl.substr(open + 2, close - open - 2));
    auto it = vars.find(key);
    if (it == vars.end()) throw SpecError("unbound placeholder ${" + key + "}");
    out += it->second;
    i = close + 1;
  }
  return out;
}

const std::vector<std::string>& template_names() {
  static const std::vector<std::string> names = {"regs", "daisy", "handshake", "all"};
  return names;
}

namespace {

// Joins per-cycle items into a fixed-delay sequence.
std::string sequence(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? " ##1 (" : "(") + items[i] + ")";
  return out;
}

std::string past(const std::string& ref, unsigned n) {
  return n == 0 ? ref : "$past(" + ref + ", " + std::to_string(n) + ")";
}

// Frame anchored at a sampling edge right after csn falls: cycle 2k samples
// frame bit k. Cycles up to the last sampling edge keep csn low.
std::vector<std::string> frame_items(const SpecXml& s, unsigned rw, std::uint64_t addr) {
  const unsigned last = 2 * (s.frame_width - 1);
  std::vector<std::string> items(last + 1, "!${spi.csn}");
  items[0] += " && ${spi.sck} == ${spi.sample} && $past(${spi.csn}, 1) && ${spi.mosi} == " + std::to_string(rw);
  for (unsigned j = 0; j < s.addr_bits; ++j) {
    const unsigned bit = (addr >> (s.addr_bits - 1 - j)) & 1;
    items[2 * (1 + j)] += " && ${spi.mosi} == " + std::to_string(bit);
  }
  return items;
}

std::string gen_regs(const SpecXml& s) {
  std::ostringstream out;
  out << "# SPI register access\n";
  const unsigned last = 2 * (s.frame_width - 1);
  for (const auto& r : s.registers.registers) {
    std::vector<unsigned> rw_bits;
    for (const auto& f : r.fields)
      if (f.access == Access::RW)
        for (unsigned b = f.msb + 1; b-- > f.lsb;) rw_bits.push_back(b);
    if (rw_bits.empty()) continue;
    std::sort(rw_bits.rbegin(), rw_bits.rend());
    const std::string at = "${bus.addr} == " + hex(r.address);

    // Write frame, a valid host read as the intermediate transaction, then
    // the read-back.
    auto items = frame_items(s, 1, r.address);
    items.push_back("${bus.rd} && " + at + " && !${bus.wr}");
    items.push_back("${bus.rd} && " + at + " && !${bus.wr}");
    const unsigned readback = last + 2;
    std::string cons;
    for (unsigned b : rw_bits) {
      // Data bit b is frame bit 1 + addr_bits + (data_bits - 1 - b).
      const unsigned k = 1 + s.addr_bits + (s.data_bits - 1 - b);
      if (!cons.empty()) cons += " && ";
      cons += "${bus.rdata}[" + std::to_string(b) + "] == " + past("${spi.mosi}", readback - 2 * k);
    }
    out << "prop spi_wr_" << r.name << " : " << sequence(items) << " |-> " << cons << " ;\n";

    // Read frame: the register is loaded after the address and shifted out on
    // miso, MSB first, one bit per sampling edge.
    auto ritems = frame_items(s, 0, r.address);
    const unsigned load = 2 * s.addr_bits;
    std::string rcons;
    for (unsigned j = 0; j < s.data_bits; ++j) {
      const unsigned b = s.data_bits - 1 - j;
      const unsigned sampled = 2 * (s.addr_bits + 1 + j);
      if (!rcons.empty()) rcons += " && ";
      rcons += past("${spi.miso}", last - sampled) + " == " +
               past("${bus.rdata}[" + std::to_string(b) + "]", last - load);
    }
    out << "prop spi_rd_" << r.name << " : " << sequence(ritems) << " |-> " << rcons << " ;\n";
  }
  return out.str();
}

std::string gen_daisy(const SpecXml& s) {
  std::ostringstream out;
  out << "# daisy chain\n";
  const unsigned span = 2 * s.frame_width;
  std::vector<std::string> items(span + 1, "!${spi.csn}");
  items[0] += " && ${spi.sck} == ${spi.sample}";
  std::string in = "${daisy.in}";
  for (std::size_t i = 0; i < s.daisy_stages.size(); ++i) {
    const std::string& stage = s.daisy_stages[i];
    out << "prop daisy_" << i << " : " << sequence(items) << " |-> " << stage << " == "
        << past(in, span) << " ;\n";
    in = stage;
  }
  return out.str();
}

std::string gen_handshake(const SpecXml& s) {
  std::ostringstream out;
  out << "# AMS handshake\n";
  out << "prop hs_start_busy : ${handshake.start} |=> ${handshake.busy} ;\n";
  out << "prop hs_busy_until_ack : ${handshake.busy} && !${handshake.ack} |=> ${handshake.busy} ;\n";
  out << "prop hs_ack_clears_busy : ${handshake.ack} |=> !${handshake.busy} ;\n";
  if (s.ack_delays.empty()) throw SpecError("unbound placeholder ${handshake.ack_delays}");
  for (std::size_t v = 0; v < s.ack_delays.size(); ++v)
    out << "prop hs_ack_tds" << v << " : ${handshake.start} && ${handshake.tds} == " << v << " |-> ##"
        << s.ack_delays[v] << " ${handshake.ack} ;\n";
  out << "prop hs_ready_idle : ${handshake.ready} |-> !${handshake.busy} ;\n";
  out << "prop hs_nmt_blocks_write : ${handshake.nmt} && ${handshake.req} && ${handshake.op} && "
         "${handshake.ready} |=> !${handshake.busy} ;\n";
  return out.str();
}

}  // namespace

std::string gen_from_xml(const SpecXml& spec, const std::string& tmpl) {
  std::string text;
  if (tmpl == "regs") {
    text = gen_regs(spec);
  } else if (tmpl == "daisy") {
    text = gen_daisy(spec);
  } else if (tmpl == "handshake") {
    text = gen_handshake(spec);
  } else if (tmpl == "all") {
    text = gen_regs(spec) + "\n" + gen_daisy(spec) + "\n" + gen_handshake(spec);
  } else {
    throw SpecError("unknown template '" + tmpl + "' (expected regs, daisy, handshake or all)");
  }
  return expand(text, spec.vars);
}

}  // namespace formalign::specgen
