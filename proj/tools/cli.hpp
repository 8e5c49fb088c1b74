#pragma once

// The `mrca` command line: simulate-lookdown, simulate-particles, tables,
// verify and replay. Kept in a library so tests can drive it in-process.

#include <ostream>
#include <string>
#include <vector>

namespace mrca::cli {

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kUsage = 2, kIo = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "MRCA_OUT_DIR";

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mrca::cli
