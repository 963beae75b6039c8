#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kinex::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kRuntime = 3 };

/// Entry point shared by the `kinex` binary and the tests. `args` excludes
/// the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// --jobs default: $KINEX_JOBS when set to a positive integer, else the
/// OpenMP thread count.
int default_jobs();

}  // namespace kinex::cli
