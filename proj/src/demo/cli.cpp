#include "formalign/demo/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "formalign/demo/demo.hpp"
#include "formalign/demo/flow.hpp"
#include "formalign/demo/vcd.hpp"
#include "formalign/ir/lowering.hpp"
#include "formalign/ir/parser.hpp"
#include "formalign/props/evaluator.hpp"
#include "formalign/props/parser.hpp"
#include "formalign/specgen/conn.hpp"
#include "formalign/specgen/regmap.hpp"
#include "formalign/specgen/xmlgen.hpp"

namespace formalign::demo {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw std::runtime_error("cannot write '" + path + "'");
}

struct CheckOpts {
  std::string engine = "kind";
  unsigned kmax = 20;
  unsigned depth = 50;
  unsigned jobs = 1;
  std::string lemmas;
  std::string cex_dir;
  bool jsonl = false;
  bool no_timing = false;
  std::uint64_t seed = 0;

  engine::CheckConfig config() const {
    engine::CheckConfig cfg;
    cfg.engine = engine == "bmc" ? engine::EngineKind::Bmc : engine::EngineKind::KInduction;
    cfg.kmax = kmax;
    cfg.bmc_depth = depth;
    cfg.jobs = jobs;
    cfg.engine_opt.seed = seed;
    if (const char* env = std::getenv("FORMALIGN_SEED")) cfg.engine_opt.seed = std::stoull(env);
    return cfg;
  }
};

void add_check_opts(CLI::App* cmd, CheckOpts& o) {
  cmd->add_option("--engine", o.engine, "bmc or kind")->check(CLI::IsMember({"bmc", "kind"}));
  cmd->add_option("--kmax", o.kmax, "k-induction bound");
  cmd->add_option("--depth", o.depth, "BMC depth");
  cmd->add_option("--jobs", o.jobs, "properties checked in parallel")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "solver seed (FORMALIGN_SEED overrides)");
  cmd->add_option("--cex-dir", o.cex_dir, "write a VCD per counterexample");
  cmd->add_flag("--jsonl", o.jsonl, "JSON lines report");
  cmd->add_flag("--no-timing", o.no_timing, "omit run times from the report");
}

void dump_cex(const ir::TransitionSystem& design, const props::PropFile& file,
              const std::vector<engine::PropertyResult>& results, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& r : results) {
    if (r.result.verdict != engine::Verdict::Falsified || !r.result.trace) continue;
    const props::Property* p = file.find(r.name);
    if (!p) continue;
    std::vector<const props::Property*> lemmas;
    for (const auto& n : r.assumed)
      if (const auto* l = file.find(n)) lemmas.push_back(l);
    auto prep = engine::prepare_check(design, file, *p, lemmas);
    write_vcd_file(*r.result.trace, prep.full, (fs::path(dir) / (r.name + ".vcd")).string());
  }
}

// Checks `text` against `design`, prints the report and returns the exit code.
int run_checks(const ir::TransitionSystem& design, const std::string& text, const CheckOpts& o,
               std::ostream& out) {
  auto file = props::parse_props(text);
  engine::LemmaPlan plan;
  if (!o.lemmas.empty()) plan = engine::parse_lemma_plan(read_file(o.lemmas));
  auto results = engine::check_properties(design, file, o.config(), o.lemmas.empty() ? nullptr : &plan);
  for (const auto& f : file.findings) out << "FINDING " << f.name << ": " << f.message << '\n';
  for (const auto& r : results)
    out << (o.jsonl ? engine::report_json(r, !o.no_timing) : engine::report_line(r, !o.no_timing)) << '\n';
  if (!o.cex_dir.empty()) dump_cex(design, file, results, o.cex_dir);
  return exit_code(results, file.findings.size());
}

// Writes generated text to `path`, or to `out` when there is no path and
// nothing is run.
void emit(const std::string& text, const std::string& path, bool run, std::ostream& out) {
  if (!path.empty()) write_file(path, text);
  else if (!run) out << text;
}

int simulate(const ir::TransitionSystem& design, unsigned cycles, std::uint64_t seed,
             const std::string& vcd, const std::string& props_path, std::ostream& out,
             std::ostream& err) {
  const auto ts = ir::lower_analog_ports(design);
  ir::Interpreter in(ts);
  std::mt19937_64 rng(seed);
  ir::Trace tr;
  ir::State s = in.initial_state();
  for (unsigned t = 0; t < cycles; ++t) {
    bool ok = false;
    ir::Valuation v;
    for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
      for (const auto& p : ts.inputs) {
        std::uint64_t x = rng();
        v[p.name] = p.width >= 64 ? x : x & ((std::uint64_t{1} << p.width) - 1);
      }
      auto r = in.step(s, v);
      ok = true;
      for (const auto& [name, a] : r.assumptions)
        if (!a) ok = false;
      if (ok) {
        tr.cycles.push_back(in.observe(s, v));
        s = r.next;
      }
    }
    if (!ok) {
      err << "error: no input satisfies the assumptions at cycle " << t << '\n';
      return kUsage;
    }
  }
  if (!vcd.empty()) write_vcd_file(tr, ts, vcd);
  if (props_path.empty()) return kPass;
  auto file = props::parse_props(read_file(props_path));
  int code = kPass;
  for (const auto& p : file.props) {
    auto r = props::eval_property_on_trace(p, tr, file.flags);
    out << p.name << ' ' << props::verdict_name(r.verdict);
    if (r.verdict == props::EvalResult::Verdict::Fail) {
      out << ' ' << r.fail_cycle;
      code = kFail;
    }
    out << '\n';
  }
  return code;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Formal property checking for mixed-signal control logic", "formalign"};
  app.require_subcommand(1);

  CheckOpts co;
  std::string ir_path, props_path, csv_path, bind_path, xml_path, out_path, tmpl = "all";
  bool run = false, reverse = false;
  unsigned max_latency = 2;

  auto* check = app.add_subcommand("check", "check properties on a design");
  check->add_option("design", ir_path, "design IR")->required();
  check->add_option("props", props_path, "property file")->required();
  check->add_option("--lemmas", co.lemmas, "lemma plan");
  add_check_opts(check, co);

  auto* csr = app.add_subcommand("csr", "register-map checks from CSV");
  csr->add_option("design", ir_path)->required();
  csr->add_option("regs", csv_path, "register map CSV")->required();
  csr->add_option("bind", bind_path, "bus binding")->required();
  csr->add_option("--out", out_path, "write the generated properties");
  csr->add_flag("--run", run, "check the generated properties");
  add_check_opts(csr, co);

  auto* conn = app.add_subcommand("conn", "connectivity checks");
  conn->add_option("design", ir_path)->required();
  conn->add_option("table", csv_path, "connectivity CSV");
  conn->add_flag("--reverse", reverse, "extract the table from the design");
  conn->add_option("--max-latency", max_latency, "register stages followed by --reverse");
  conn->add_option("--out", out_path, "write the table (--reverse) or the properties");
  conn->add_flag("--run", run, "check the generated properties");
  add_check_opts(conn, co);

  auto* gen = app.add_subcommand("gen", "properties from an XML spec");
  gen->add_option("design", ir_path)->required();
  gen->add_option("spec", xml_path, "XML spec")->required();
  gen->add_option("--template", tmpl)->check(CLI::IsMember(specgen::template_names()));
  gen->add_option("--out", out_path, "write the generated properties");
  gen->add_flag("--run", run, "check the generated properties");
  add_check_opts(gen, co);

  std::string bug = "none", emit_what = "all", out_dir = ".", steps;
  auto* demo = app.add_subcommand("demo", "the SPI/analog demo design");
  demo->add_option("--bug", bug, "none, B1, B2, B3 or B4");
  demo->add_option("--emit", emit_what, "all, none or one file name");
  demo->add_option("--out", out_dir, "directory for emitted files");
  demo->add_option("--steps", steps, "comma-separated subset of fpv,csr,conn,conn-rev,gen");
  demo->add_flag("--run", run, "run the whole flow");
  add_check_opts(demo, co);

  unsigned cycles = 100;
  std::uint64_t seed = 1;
  std::string vcd;
  auto* sim = app.add_subcommand("sim", "random simulation");
  sim->add_option("design", ir_path)->required();
  sim->add_option("--cycles", cycles);
  sim->add_option("--seed", seed);
  sim->add_option("--vcd", vcd, "write the trace");
  sim->add_option("--props", props_path, "evaluate properties on the trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*demo) {
      auto b = parse_bug(bug);
      if (!b) throw std::runtime_error("unknown bug '" + bug + "'");
      DemoConfig cfg;
      cfg.bug = *b;
      auto bundle = build_demo(cfg);
      bool known = emit_what == "all" || emit_what == "none";
      for (const auto& [name, text] : bundle_files(bundle)) {
        if (emit_what != "all" && emit_what != name) continue;
        known = true;
        fs::create_directories(out_dir);
        write_file((fs::path(out_dir) / name).string(), text);
      }
      if (!known) throw std::runtime_error("unknown file '" + emit_what + "'");
      if (!run) return kPass;
      FlowOptions fo;
      fo.cfg = co.config();
      std::stringstream ss(steps);
      for (std::string s; std::getline(ss, s, ',');) fo.steps.push_back(s);
      auto r = run_flow(bundle, fo);
      out << flow_report(r, !co.no_timing, co.jsonl);
      return exit_code(r);
    }

    const auto design = ir::parse_ir_or_throw(read_file(ir_path));
    if (*check) return run_checks(design, read_file(props_path), co, out);
    if (*sim) {
      if (sim->count("--seed") == 0)
        if (const char* env = std::getenv("FORMALIGN_SEED")) seed = std::stoull(env);
      return simulate(design, cycles, seed, vcd, props_path, out, err);
    }
    if (*csr) {
      auto bind = specgen::resolve_binding(design, specgen::parse_binding(read_file(bind_path)));
      auto map = specgen::parse_regmap_csv(read_file(csv_path), bind.data_width);
      auto text = specgen::gen_csr_props(map, bind);
      emit(text, out_path, run, out);
      return run ? run_checks(design, text, co, out) : kPass;
    }
    if (*conn) {
      if (reverse) {
        auto table = specgen::extract_connectivity(design, max_latency);
        auto csv = specgen::print_conn_csv(table);
        emit(csv, out_path, run, out);
        return run ? run_checks(design, specgen::gen_conn_props(table, design), co, out) : kPass;
      }
      if (csv_path.empty()) throw std::runtime_error("conn needs a table unless --reverse is given");
      auto text = specgen::gen_conn_props(specgen::parse_conn_csv(read_file(csv_path)), design);
      emit(text, out_path, run, out);
      if (run) return run_checks(design, text, co, out);
      return props::parse_props(text).findings.empty() ? kPass : kFail;
    }
    if (*gen) {
      auto text = specgen::gen_from_xml(specgen::parse_spec_xml(read_file(xml_path)), tmpl);
      emit(text, out_path, run, out);
      return run ? run_checks(design, text, co, out) : kPass;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace formalign::demo
