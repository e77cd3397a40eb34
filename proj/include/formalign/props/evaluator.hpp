#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "formalign/ir/interp.hpp"
#include "formalign/props/ast.hpp"

namespace formalign::props {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvalResult {
  enum class Verdict { Pass, Fail, Pending };

  Verdict verdict = Verdict::Pass;
  std::size_t fail_cycle = 0;  // Fail only
  std::size_t matches = 0;     // antecedent completions inside the trace
  bool vacuous = false;        // implication whose antecedent never completed
};

const char* verdict_name(EvalResult::Verdict v);

/// Direct semantics of `p` on a finite trace, independent of the monitor
/// construction. $past reads 0 before the trace starts. An obligation whose
/// items run past the last cycle without failing is Pending. `flags` supplies
/// the definitions of flag names that the trace does not record.
EvalResult eval_property_on_trace(const Property& p, const ir::Trace& tr,
                                  const std::vector<Flag>& flags = {});

/// Value of `e` at `cycle`.
std::uint64_t eval_at(const BExprPtr& e, const ir::Trace& tr, std::size_t cycle,
                      const std::vector<Flag>& flags = {});

}  // namespace formalign::props
