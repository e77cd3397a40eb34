#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "formalign/specgen/regmap.hpp"

namespace formalign::specgen {

/// Platform-independent IP description:
///
///   <spec name="...">
///     <registers data_width="8">
///       <register name="ctrl" addr="0x0">
///         <field name="tds" msb="1" lsb="0" access="RW" reset="0x0"/>
///       </register>
///     </registers>
///     <protocol frame_width="13" addr_bits="4" data_bits="8" cpol="0" cpha="0" daisy_length="2"/>
///     <spi csn="csn" sck="sck" mosi="mosi" miso="miso"/>
///     <bus rd="host_rd" wr="host_wr" addr="host_addr" rdata="host_rdata"/>
///     <daisy in="mosi"><stage out="spi_sdo"/><stage out="dsy_sdo"/></daisy>
///     <handshake start=".." ack=".." busy=".." ready=".." tds=".." ack_delays="1,2,3,4"
///                req=".." op=".." nmt=".."/>
///   </spec>
///
/// A frame is one rw bit (1 = write), the address and the data, MSB first,
/// one bit every second cycle.
struct SpecXml {
  std::string name;
  RegisterMap registers;
  unsigned frame_width = 0;
  unsigned addr_bits = 0;
  unsigned data_bits = 0;
  unsigned cpol = 0;
  unsigned cpha = 0;
  unsigned daisy_length = 0;
  std::vector<std::string> daisy_stages;  // stage outputs, upstream first
  std::vector<unsigned> ack_delays;       // per time-delay code

  /// Every attribute of the spi, bus, daisy and handshake sections as
  /// `section.attr`, plus derived `spi.sample` (sck level at a sampling edge).
  std::map<std::string, std::string> vars;
};

SpecXml parse_spec_xml(std::string_view text);

/// Replaces each `${key}`; throws SpecError on a key missing from `vars`.
std::string expand(std::string_view tmpl, const std::map<std::string, std::string>& vars);

/// Template names accepted by gen_from_xml.
const std::vector<std::string>& template_names();

/// Property text for template regs, daisy, handshake or all.
std::string gen_from_xml(const SpecXml& spec, const std::string& tmpl);

}  // namespace formalign::specgen
