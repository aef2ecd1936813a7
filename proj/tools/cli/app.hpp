#pragma once

#include <ostream>

namespace sld::cli {

enum ExitCode : int { kOk = 0, kInvalidConfig = 2, kInfeasible = 3, kIoFailure = 4 };

/// Entry point of the `sld` executable, with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sld::cli
