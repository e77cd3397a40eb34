#include "formalign/demo/demo.hpp"

#include <sstream>
#include <stdexcept>

#include "formalign/ir/lowering.hpp"
#include "formalign/ir/parser.hpp"

namespace formalign::demo {

std::string_view bug_name(Bug b) {
  switch (b) {
    case Bug::None: return "none";
    case Bug::B1: return "B1";
    case Bug::B2: return "B2";
    case Bug::B3: return "B3";
    case Bug::B4: return "B4";
  }
  return "?";
}

std::optional<Bug> parse_bug(std::string_view s) {
  for (Bug b : {Bug::None, Bug::B1, Bug::B2, Bug::B3, Bug::B4})
    if (s == bug_name(b)) return b;
  return std::nullopt;
}

std::string_view app_name(App a) {
  switch (a) {
    case App::Fpv: return "fpv";
    case App::Csr: return "csr";
    case App::Conn: return "conn";
  }
  return "?";
}

const std::vector<BugSpec>& bug_specs() {
  static const std::vector<BugSpec> specs = {
      {Bug::B1, "analog read data reaches the register bank truncated to 4 bits", App::Conn,
       "width-mismatch finding", "conn", "conn_2"},
      {Bug::B2, "correct-data flag not cleared when a new transaction starts", App::Fpv, "falsified", "fpv",
       "fpv_cdf_cleared"},
      {Bug::B3, "read-only id register has a write path", App::Csr, "falsified", "csr",
       "csr_id_id_ro"},
      {Bug::B4, "csn abort keeps the bit counter, corrupting the next frame", App::Fpv, "falsified", "gen",
       "spi_wr_ctrl"},
  };
  return specs;
}

namespace {

using namespace ir;

Expr c(unsigned w, std::uint64_t v) { return constant(w, v); }

Expr any_of(const std::vector<Expr>& xs) {
  Expr out = xs.at(0);
  for (std::size_t i = 1; i < xs.size(); ++i) out = bor(out, xs[i]);
  return out;
}

TransitionSystem build_ts(const DemoConfig& cfg) {
  const Bug bug = cfg.bug;
  const unsigned fw = cfg.frame_width();
  TransitionSystem ts;
  ts.name = "spi_ams_demo";
  auto v = [&](const std::string& n) { return ts.ref(n); };

  ts.add_input("csn", 1);
  ts.add_input("sck", 1);
  ts.add_input("mosi", 1);
  ts.add_input("host_wr", 1);
  ts.add_input("host_rd", 1);
  ts.add_input("host_addr", 4);
  ts.add_input("host_wdata", 8);
  ts.add_analog("ana_en", 1);
  ts.add_analog("ana_vref", 4, std::pair<std::uint64_t, std::uint64_t>{2, 13});

  // SPI slave
  ts.add_register("spi_sck_q", 1, 0, v("sck"));
  ts.add_register("spi_cnt", 4, 0);
  ts.add_register("spi_sh", fw, 0);
  ts.add_register("spi_tx", 8, 0);
  ts.add_wire("spi_rise", band(v("sck"), bnot(v("spi_sck_q"))));
  ts.add_wire("spi_sample", band(v("spi_rise"), bnot(v("csn"))));
  ts.add_wire("spi_frame", concat(slice(v("spi_sh"), fw - 2, 0), v("mosi")));
  ts.add_wire("spi_last", band(v("spi_sample"), eq(v("spi_cnt"), c(4, fw - 1))));
  ts.add_wire("spi_wr", band(v("spi_last"), slice(v("spi_frame"), fw - 1, fw - 1)));
  ts.add_wire("spi_addr_w", slice(v("spi_frame"), 11, 8));
  ts.add_wire("spi_wdata", slice(v("spi_frame"), 7, 0));
  ts.add_wire("spi_rd", bit_and({v("spi_sample"), eq(v("spi_cnt"), c(4, 4)), bnot(slice(v("spi_sh"), 3, 3))}));
  ts.add_wire("spi_addr_r", concat(slice(v("spi_sh"), 2, 0), v("mosi")));
  ts.add_wire("spi_acc", bor(v("spi_wr"), v("spi_rd")));
  ts.add_wire("spi_addr", mux(v("spi_wr"), v("spi_addr_w"), v("spi_addr_r")));
  ts.add_wire("spi_sdo", slice(v("spi_sh"), fw - 1, fw - 1));
  const Expr counted = mux(v("spi_sample"), mux(v("spi_last"), c(4, 0), add(v("spi_cnt"), c(4, 1))), v("spi_cnt"));
  ts.set_next("spi_cnt", mux(v("csn"), bug == Bug::B4 ? v("spi_cnt") : c(4, 0), counted));
  ts.set_next("spi_sh", mux(v("spi_sample"), v("spi_frame"), v("spi_sh")));
  ts.add_assumption("spi_sck_toggles", neq(v("sck"), v("spi_sck_q")));

  // Further daisy-chain devices: plain shift stages on the same edges.
  std::string upstream = "spi_sdo";
  for (unsigned i = 1; i < cfg.daisy_length; ++i) {
    const std::string sh = "dsy" + std::to_string(i) + "_sh";
    const std::string sdo = "dsy" + std::to_string(i) + "_sdo";
    ts.add_register(sh, fw, 0);
    ts.set_next(sh, mux(v("spi_sample"), concat(slice(v(sh), fw - 2, 0), v(upstream)), v(sh)));
    ts.add_wire(sdo, slice(v(sh), fw - 1, fw - 1));
    upstream = sdo;
  }

  // Register bank; an SPI access wins over the host port.
  ts.add_wire("rb_wr", bor(v("spi_wr"), band(v("host_wr"), bnot(v("spi_acc")))));
  ts.add_wire("rb_rd", bor(v("spi_rd"), band(v("host_rd"), bnot(v("spi_acc")))));
  ts.add_wire("rb_addr", mux(v("spi_acc"), v("spi_addr"), v("host_addr")));
  ts.add_wire("rb_wdata", mux(v("spi_acc"), v("spi_wdata"), v("host_wdata")));
  auto we = [&](unsigned a) { return band(v("rb_wr"), eq(v("rb_addr"), c(4, a))); };
  ts.add_wire("rb_we_ctrl", we(0));
  ts.add_wire("rb_we_wdat", we(1));
  ts.add_wire("rb_we_cmd", we(2));
  ts.add_wire("rb_we_evt", we(5));
  ts.add_register("rb_ctrl", 5, 0);
  ts.set_next("rb_ctrl", mux(v("rb_we_ctrl"), slice(v("rb_wdata"), 4, 0), v("rb_ctrl")));
  ts.add_register("rb_wdat", 8, 0);
  ts.set_next("rb_wdat", mux(v("rb_we_wdat"), v("rb_wdata"), v("rb_wdat")));
  ts.add_wire("rb_start_req", band(v("rb_we_cmd"), slice(v("rb_wdata"), 0, 0)));
  ts.add_register("rb_evt", 1, 0);
  Expr id = c(8, 0xA5);
  if (bug == Bug::B3) {
    ts.add_wire("rb_we_id", we(6));
    ts.add_register("rb_id", 8, 0xA5);
    ts.set_next("rb_id", mux(v("rb_we_id"), v("rb_wdata"), v("rb_id")));
    id = v("rb_id");
  }

  // Analog stub
  ts.add_wire("ana_tds", slice(v("rb_ctrl"), 1, 0));
  ts.add_wire("ana_op", slice(v("rb_ctrl"), 2, 2));
  ts.add_wire("ana_maddr", slice(v("rb_ctrl"), 4, 3));
  for (const auto& [n, w] : {std::pair{"ana_busy", 1u}, {"ana_tds_q", 2u}, {"ana_op_q", 1u},
                              {"ana_maddr_q", 2u}, {"ana_wd_q", 8u}, {"ana_nmt", 1u}, {"ana_cdf", 1u},
                              {"ana_data_o", 8u}})
    ts.add_register(n, w, 0);
  for (unsigned i = 0; i < 4; ++i) ts.add_register("ana_mem" + std::to_string(i), 8, 0);
  ts.add_register("ana_vref_q", 4, 0, v("ana_vref"));
  // Readiness depends on the delay lines added below.
  ts.add_wire("ana_start_fire", bit_and({v("rb_start_req"), v("ana_en"), var("ana_ready", 1),
                                         bnot(band(v("ana_op"), v("ana_nmt")))}));
  std::vector<Expr> pipe;
  for (unsigned d = 1; d <= 4; ++d) {
    ts = delay_to_flops(ts, "ana_start_fire", d);
    for (unsigned i = 1; i <= d; ++i) pipe.push_back(v(delayed_name("ana_start_fire", d) + "_r" + std::to_string(i)));
  }
  ts.add_wire("ana_pipe_empty", bnot(any_of(pipe)));
  ts.add_wire("ana_ready", band(bnot(v("ana_busy")), v("ana_pipe_empty")));
  auto dly = [&](unsigned d) { return v(delayed_name("ana_start_fire", d)); };
  ts.add_wire("ana_ack", mux(eq(v("ana_tds_q"), c(2, 0)), dly(1),
                             mux(eq(v("ana_tds_q"), c(2, 1)), dly(2),
                                 mux(eq(v("ana_tds_q"), c(2, 2)), dly(3), dly(4)))));
  ts.add_wire("ana_rdata", mux(eq(v("ana_maddr_q"), c(2, 0)), v("ana_mem0"),
                               mux(eq(v("ana_maddr_q"), c(2, 1)), v("ana_mem1"),
                                   mux(eq(v("ana_maddr_q"), c(2, 2)), v("ana_mem2"), v("ana_mem3")))));
  const Expr fire = v("ana_start_fire"), ack = v("ana_ack");
  ts.set_next("ana_busy", mux(fire, c(1, 1), mux(ack, c(1, 0), v("ana_busy"))));
  ts.set_next("ana_tds_q", mux(fire, v("ana_tds"), v("ana_tds_q")));
  ts.set_next("ana_op_q", mux(fire, v("ana_op"), v("ana_op_q")));
  ts.set_next("ana_maddr_q", mux(fire, v("ana_maddr"), v("ana_maddr_q")));
  ts.set_next("ana_wd_q", mux(fire, v("rb_wdat"), v("ana_wd_q")));
  ts.set_next("ana_nmt", bor(v("ana_nmt"), band(fire, v("ana_op"))));
  ts.set_next("ana_cdf", mux(fire, bug == Bug::B2 ? v("ana_cdf") : c(1, 0), mux(ack, c(1, 1), v("ana_cdf"))));
  for (unsigned i = 0; i < 4; ++i) {
    const std::string m = "ana_mem" + std::to_string(i);
    ts.set_next(m, mux(bit_and({ack, v("ana_op_q"), eq(v("ana_maddr_q"), c(2, i))}), v("ana_wd_q"), v(m)));
  }
  ts.set_next("ana_data_o", mux(fire, c(8, 0), mux(band(ack, bnot(v("ana_op_q"))), v("ana_rdata"), v("ana_data_o"))));

  // Bank inputs from the stub and the read mux.
  ts.add_wire("rb_ack_i", ack);
  ts.set_next("rb_evt", mux(v("rb_ack_i"), c(1, 1),
                            mux(band(v("rb_we_evt"), slice(v("rb_wdata"), 0, 0)), c(1, 0), v("rb_evt"))));
  ts.add_wire("rb_rdat_i", bug == Bug::B1 ? slice(v("ana_data_o"), 3, 0) : v("ana_data_o"));
  ts.add_wire("rb_status", concat(c(4, 0), concat(v("ana_nmt"), concat(v("ana_cdf"), concat(v("ana_ready"), v("ana_busy"))))));
  auto at = [&](unsigned a) { return eq(v("rb_addr"), c(4, a)); };
  ts.add_wire("rb_rdata",
              mux(at(0), zext(v("rb_ctrl"), 8),
                  mux(at(1), v("rb_wdat"),
                      mux(at(3), v("rb_status"),
                          mux(at(4), zext(v("rb_rdat_i"), 8),
                              mux(at(5), zext(v("rb_evt"), 8), mux(at(6), id, c(8, 0))))))));
  ts.set_next("spi_tx", mux(v("spi_rd"), v("rb_rdata"),
                            mux(v("spi_sample"), concat(slice(v("spi_tx"), 6, 0), c(1, 0)), v("spi_tx"))));

  ts.add_output("miso", slice(v("spi_tx"), 7, 7));
  ts.add_output("sdo", v(upstream));
  ts.add_output("host_rdata", v("rb_rdata"));
  ts.add_output("ana_start_o", fire);
  ts.add_output("ana_vref_o", v("ana_vref_q"));
  ts.check();
  return ts;
}

const char* kProps = R"(# analog handshake
prop fpv_start_busy : ana_start_fire |=> ana_busy ;
prop fpv_busy_until_ack : ana_busy && !ana_ack |=> ana_busy ;
prop fpv_ack_clears_busy : ana_ack |=> !ana_busy ;
prop fpv_ack_tds0 : ana_start_fire && ana_tds == 0 |-> ##1 ana_ack ;
prop fpv_ack_tds1 : ana_start_fire && ana_tds == 1 |-> ##2 ana_ack ;
prop fpv_ack_tds2 : ana_start_fire && ana_tds == 2 |-> ##3 ana_ack ;
prop fpv_ack_tds3 : ana_start_fire && ana_tds == 3 |-> ##4 ana_ack ;
prop fpv_ready_idle : ana_ready |-> !ana_busy ;
prop fpv_nmt_blocks_write : ana_nmt && rb_start_req && ana_op && ana_ready |=> !ana_busy ;

# status and data seen by the register bank
prop fpv_cdf_cleared : ana_start_fire |=> !ana_cdf ;
prop fpv_cdf_set_on_ack : ana_ack |=> ana_cdf ;
prop fpv_status_busy : rb_status[0] == ana_busy ;
prop fpv_read_data : ana_ack && !ana_op_q |=> ana_data_o == $past(ana_rdata, 1) ;
prop fpv_vref_tracks : ana_vref_o == $past(ana_vref, 1) ;
)";

const char* kRegs = R"(reg,addr,field,msb,lsb,access,reset
ctrl,0x0,tds,1,0,RW,0x0
ctrl,0x0,op,2,2,RW,0x0
ctrl,0x0,maddr,4,3,RW,0x0
wdat,0x1,data,7,0,RW,0x0
cmd,0x2,start,0,0,WO,0x0
status,0x3,busy,0,0,RO,0x0
status,0x3,ready,1,1,RO,0x1
status,0x3,cdf,2,2,RO,0x0
status,0x3,nmt,3,3,RO,0x0
rdat,0x4,data,7,0,RO,0x0
evt,0x5,done,0,0,W1C,0x0
id,0x6,id,7,0,RO,0xA5
)";

const char* kBind = R"(# register bank bus
wr=rb_wr
rd=rb_rd
addr=rb_addr
wdata=rb_wdata
rdata=rb_rdata
# analog side held idle while registers are checked
assume=!ana_en
)";

const char* kConn = R"csv(src_block,src_signal,dst_block,dst_signal,condition,latency
ana,ana_ack,rb,rb_ack_i,,0
ana,ana_data_o,rb,rb_rdat_i,,0
rb,rb_ctrl[1:0],ana,ana_tds,,0
rb,rb_ctrl[2],ana,ana_op,,0
rb,rb_ctrl[4:3],ana,ana_maddr,,0
spi,spi_wdata,rb,rb_wdata,spi_acc == 1,0
host,host_wdata,rb,rb_wdata,spi_acc == 0,0
spi,spi_addr,rb,rb_addr,spi_acc == 1,0
rb,rb_rdata,host,host_rdata,,0
rb,rb_rdata,spi,spi_tx,"$past(spi_rd, 1)",1
ana,ana_start_fire,ana,ana_start_o,,0
ana,ana_start_fire,ana,ana_start_fire_dly2,,2
)csv";

std::string spec_xml(const DemoConfig& cfg) {
  std::ostringstream x;
  x << "<?xml version=\"1.0\"?>\n<spec name=\"spi_ams_demo\">\n  <registers data_width=\"" << cfg.data_bits
    << "\">\n";
  const std::vector<std::pair<std::string, std::string>> regs = {
      {"ctrl", "0x0"}, {"wdat", "0x1"}, {"cmd", "0x2"}, {"status", "0x3"},
      {"rdat", "0x4"}, {"evt", "0x5"},  {"id", "0x6"}};
  struct F {
    const char* reg;
    const char* name;
    unsigned msb, lsb;
    const char* access;
    const char* reset;
  };
  const F fields[] = {{"ctrl", "tds", 1, 0, "RW", "0x0"},    {"ctrl", "op", 2, 2, "RW", "0x0"},
                      {"ctrl", "maddr", 4, 3, "RW", "0x0"},  {"wdat", "data", 7, 0, "RW", "0x0"},
                      {"cmd", "start", 0, 0, "WO", "0x0"},   {"status", "busy", 0, 0, "RO", "0x0"},
                      {"status", "ready", 1, 1, "RO", "0x1"}, {"status", "cdf", 2, 2, "RO", "0x0"},
                      {"status", "nmt", 3, 3, "RO", "0x0"},  {"rdat", "data", 7, 0, "RO", "0x0"},
                      {"evt", "done", 0, 0, "W1C", "0x0"},   {"id", "id", 7, 0, "RO", "0xA5"}};
  for (const auto& [r, a] : regs) {
    x << "    <register name=\"" << r << "\" addr=\"" << a << "\">\n";
    for (const auto& f : fields)
      if (r == f.reg)
        x << "      <field name=\"" << f.name << "\" msb=\"" << f.msb << "\" lsb=\"" << f.lsb
          << "\" access=\"" << f.access << "\" reset=\"" << f.reset << "\"/>\n";
    x << "    </register>\n";
  }
  x << "  </registers>\n";
  x << "  <protocol frame_width=\"" << cfg.frame_width() << "\" addr_bits=\"" << cfg.addr_bits
    << "\" data_bits=\"" << cfg.data_bits << "\" cpol=\"0\" cpha=\"0\" daisy_length=\"" << cfg.daisy_length
    << "\"/>\n";
  x << "  <spi csn=\"csn\" sck=\"sck\" mosi=\"mosi\" miso=\"miso\"/>\n";
  x << "  <bus rd=\"host_rd\" wr=\"host_wr\" addr=\"host_addr\" rdata=\"host_rdata\"/>\n";
  x << "  <daisy in=\"mosi\">\n    <stage out=\"spi_sdo\"/>\n";
  for (unsigned i = 1; i < cfg.daisy_length; ++i) x << "    <stage out=\"dsy" << i << "_sdo\"/>\n";
  x << "  </daisy>\n";
  x << "  <handshake start=\"ana_start_fire\" ack=\"ana_ack\" busy=\"ana_busy\" ready=\"ana_ready\"\n"
       "             tds=\"ana_tds\" ack_delays=\"1,2,3,4\" req=\"rb_start_req\" op=\"ana_op\" nmt=\"ana_nmt\"/>\n";
  x << "</spec>\n";
  return x.str();
}

}  // namespace

DemoBundle build_demo(const DemoConfig& cfg) {
  if (cfg.tds_width != 2 || cfg.addr_bits != 4 || cfg.data_bits != 8)
    throw std::invalid_argument("demo supports a 2-bit delay code, 4-bit address and 8-bit data only");
  if (cfg.daisy_length == 0) throw std::invalid_argument("daisy length must be at least 1");
  DemoBundle b;
  b.ts = build_ts(cfg);
  b.ir = ir::print_ir(b.ts);
  b.props = kProps;
  b.regs = kRegs;
  b.bind = kBind;
  b.conn = kConn;
  b.spec = spec_xml(cfg);
  return b;
}

std::vector<std::pair<std::string, std::string>> bundle_files(const DemoBundle& b) {
  return {{"demo.ir", b.ir},           {"demo.props", b.props}, {"demo_regs.csv", b.regs},
          {"demo.bind", b.bind},       {"demo_conn.csv", b.conn}, {"demo_spec.xml", b.spec}};
}

}  // namespace formalign::demo
