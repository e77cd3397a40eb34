#include "formalign/demo/flow.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "formalign/ir/parser.hpp"
#include "formalign/props/parser.hpp"
#include "formalign/specgen/conn.hpp"
#include "formalign/specgen/regmap.hpp"
#include "formalign/specgen/xmlgen.hpp"

namespace formalign::demo {

const FlowStep* FlowResult::find(const std::string& step) const {
  for (const auto& s : steps)
    if (s.name == step) return &s;
  return nullptr;
}

const engine::PropertyResult* FlowResult::result(const std::string& step,
                                                 const std::string& prop) const {
  const FlowStep* s = find(step);
  if (!s) return nullptr;
  for (const auto& r : s->results)
    if (r.name == prop) return &r;
  return nullptr;
}

namespace {

std::string step_props(const std::string& step, const DemoBundle& b,
                       const ir::TransitionSystem& ts) {
  if (step == "fpv") return b.props;
  if (step == "csr") {
    auto bind = specgen::resolve_binding(ts, specgen::parse_binding(b.bind));
    auto map = specgen::parse_regmap_csv(b.regs, bind.data_width);
    return specgen::gen_csr_props(map, bind);
  }
  if (step == "conn") return specgen::gen_conn_props(specgen::parse_conn_csv(b.conn), ts);
  if (step == "conn-rev") {
    // through the CSV text, as a user would
    auto table = specgen::parse_conn_csv(specgen::print_conn_csv(specgen::extract_connectivity(ts)));
    return specgen::gen_conn_props(table, ts);
  }
  if (step == "gen") return specgen::gen_from_xml(specgen::parse_spec_xml(b.spec), "all");
  throw std::invalid_argument("unknown flow step '" + step + "'");
}

}  // namespace

std::string step_properties(const DemoBundle& b, const std::string& step) {
  return step_props(step, b, ir::parse_ir_or_throw(b.ir));
}

FlowResult run_flow(const DemoBundle& b, const FlowOptions& opt) {
  const auto ts = ir::parse_ir_or_throw(b.ir);
  FlowResult out;
  for (const auto& step : opt.steps.empty() ? flow_steps() : opt.steps) {
    FlowStep s;
    s.name = step;
    s.props = step_props(step, b, ts);
    auto file = props::parse_props(s.props);
    s.findings = file.findings;
    s.results = engine::check_properties(ts, file, opt.cfg);
    out.steps.push_back(std::move(s));
  }
  return out;
}

int exit_code(const std::vector<engine::PropertyResult>& results, std::size_t findings) {
  bool unknown = false;
  for (const auto& r : results) {
    if (r.result.verdict == engine::Verdict::Falsified) return 1;
    if (r.result.verdict == engine::Verdict::Unknown) unknown = true;
  }
  if (findings) return 1;
  return unknown ? 2 : 0;
}

int exit_code(const FlowResult& r) {
  int code = 0;
  for (const auto& s : r.steps) {
    int c = exit_code(s.results, s.findings.size());
    if (c == 1) return 1;
    code = std::max(code, c);
  }
  return code;
}

std::string flow_report(const FlowResult& r, bool timing, bool json) {
  std::ostringstream os;
  for (const auto& s : r.steps) {
    for (const auto& f : s.findings) {
      if (json) {
        nlohmann::ordered_json j;
        j["step"] = s.name;
        j["finding"] = f.name;
        j["message"] = f.message;
        os << j.dump() << '\n';
      } else {
        os << '[' << s.name << "] FINDING " << f.name << ": " << f.message << '\n';
      }
    }
    for (const auto& p : s.results) {
      if (json) {
        auto j = nlohmann::ordered_json::parse(engine::report_json(p, timing));
        nlohmann::ordered_json k;
        k["step"] = s.name;
        k.update(j);
        os << k.dump() << '\n';
      } else {
        os << '[' << s.name << "] " << engine::report_line(p, timing) << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace formalign::demo
