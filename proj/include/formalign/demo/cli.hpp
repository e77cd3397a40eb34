#pragma once

#include <iosfwd>

namespace formalign::demo {

// Exit codes of the command-line tool.
enum ExitCode : int { kPass = 0, kFail = 1, kUnknown = 2, kUsage = 3 };

/// The `formalign` command line: check, csr, conn, gen, demo and sim.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace formalign::demo
