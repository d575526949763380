#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tbl/netlist.hpp"

namespace tbl {

/// Exit codes of the command-line front end.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitStatic = 2,    // parse or expansion failure
  kExitAnalysis = 3,  // simulation or analysis failure
  kExitMismatch = 4,  // verification did not match
};

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Applies one `--set <id>.<key>=<value>` override. `*` as the id targets
/// every gate and ring. Throws UnknownKeyword/UnboundPort for targets that
/// do not exist and the parser's errors for bad values.
void apply_override(CircuitAst& ast, std::string_view assignment);

}  // namespace tbl
