#pragma once

#include <ostream>

namespace qgf {

// Exit codes: 0 ok, 1 parse error, 2 invalid coupling or design, 3 flat-band
// check failed, 4 unsupported layout.
enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 1,
  kExitInvalid = 2,
  kExitFlatFail = 3,
  kExitUnsupported = 4,
};

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qgf
