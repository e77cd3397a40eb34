#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "formalign/engine/check.hpp"
#include "formalign/props/ast.hpp"

namespace formalign::engine {

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Helper lemmas and targets, one per line:
///
///   lemma  data_stable
///   target rd_after_wr : data_stable
///
/// The optional `: names` restricts which lemmas an entry may assume; without
/// it, every lemma scheduled earlier is a candidate.
struct LemmaPlan {
  struct Entry {
    std::string name;
    bool lemma = false;
    bool explicit_uses = false;
    std::vector<std::string> uses;
    int line = 0;
  };
  std::vector<Entry> entries;
};

LemmaPlan parse_lemma_plan(std::string_view text);

/// Entries in proof order: dependencies first, otherwise file order. Throws
/// PlanError on cycles, duplicate or unknown names and on entries that use a
/// target.
std::vector<LemmaPlan::Entry> schedule(const LemmaPlan& plan);

enum class EngineKind { Bmc, KInduction };

struct CheckConfig {
  EngineKind engine = EngineKind::KInduction;
  unsigned kmax = 20;
  unsigned bmc_depth = 50;  // bounded fallback once k-induction gives up
  unsigned jobs = 1;
  EngineOptions engine_opt;
};

struct PropertyResult {
  std::string name;
  CheckResult result;
  double time_ms = 0;
  std::vector<std::string> assumed;  // lemmas conjoined into the proof
};

/// The system a property check runs on: design, bound flags/assumptions,
/// monitor and lemma assumptions with analog ports lowered, and its cone of
/// influence.
struct PreparedCheck {
  ir::TransitionSystem full;
  ir::TransitionSystem reduced;
  std::string ok;
  std::string match;  // empty for invariants
};

PreparedCheck prepare_check(const ir::TransitionSystem& design, const props::PropFile& file,
                            const props::Property& p,
                            const std::vector<const props::Property*>& lemmas = {});

/// Checks `p` on `design` with the flags and assumptions of `file` bound, and
/// the ok-bits of `lemmas` assumed in every frame. A Falsified result carries
/// the CEX replayed on the whole design plus monitor.
PropertyResult check_property(const ir::TransitionSystem& design, const props::PropFile& file,
                              const props::Property& p, const CheckConfig& cfg,
                              const std::vector<const props::Property*>& lemmas = {});

/// Runs the plan's entries in schedule order. Proven lemmas are assumed by
/// later entries; lemmas that are not proven are reported and left out.
std::vector<PropertyResult> prove_with_lemmas(const ir::TransitionSystem& design,
                                              const props::PropFile& file, const LemmaPlan& plan,
                                              const CheckConfig& cfg);

/// Every property of `file`, results in file order. Properties named in
/// `plan` go through prove_with_lemmas; the rest are checked independently,
/// up to cfg.jobs at a time.
std::vector<PropertyResult> check_properties(const ir::TransitionSystem& design,
                                             const props::PropFile& file, const CheckConfig& cfg,
                                             const LemmaPlan* plan = nullptr);

/// `name verdict depth time_ms vacuous`, time and vacuity as `-` when absent.
std::string report_line(const PropertyResult& r, bool timing = true);
std::string report_json(const PropertyResult& r, bool timing = true);

}  // namespace formalign::engine
