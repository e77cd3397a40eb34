#pragma once

#include <string>
#include <vector>

#include "formalign/demo/demo.hpp"
#include "formalign/engine/prover.hpp"
#include "formalign/props/ast.hpp"

namespace formalign::demo {

// Steps of the flow, in run order.
inline const std::vector<std::string>& flow_steps() {
  static const std::vector<std::string> s = {"fpv", "csr", "conn", "conn-rev", "gen"};
  return s;
}

struct FlowStep {
  std::string name;
  std::string props;  // property text the step checked
  std::vector<props::Finding> findings;
  std::vector<engine::PropertyResult> results;
};

struct FlowResult {
  std::vector<FlowStep> steps;
  const FlowStep* find(const std::string& step) const;
  const engine::PropertyResult* result(const std::string& step, const std::string& prop) const;
};

struct FlowOptions {
  engine::CheckConfig cfg;
  std::vector<std::string> steps;  // empty: all of flow_steps()
};

/// Property text of one step, generated from the bundle's files.
std::string step_properties(const DemoBundle& b, const std::string& step);

/// Runs the apps on the bundle's files: hand-written properties, CSR checks
/// from the register map, connectivity checks from the table, the table
/// extracted back from the design, and the XML templates.
FlowResult run_flow(const DemoBundle& b, const FlowOptions& opt);

/// 0 when everything holds, 1 on any falsified property or finding, else 2
/// when some verdict is unknown.
int exit_code(const std::vector<engine::PropertyResult>& results, std::size_t findings);
int exit_code(const FlowResult& r);

/// One line per finding and per property, prefixed with the step name.
std::string flow_report(const FlowResult& r, bool timing, bool json = false);

}  // namespace formalign::demo
