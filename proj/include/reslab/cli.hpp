#pragma once

// Batch front-end.  Every subcommand prints a JSON payload (or CSV) to `out`
// and, with --out DIR, writes <command>.json / .csv / .dat files there.
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 accuracy failure.

#include <ostream>
#include <string>
#include <vector>

namespace reslab::cli {

inline constexpr const char* kVersion = "1.0.0";
/// Default for --out when the flag is absent.
inline constexpr const char* kOutputDirEnv = "RESLAB_OUTPUT_DIR";

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace reslab::cli
