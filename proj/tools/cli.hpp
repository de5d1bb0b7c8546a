#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace multitile::cli {

enum ExitCode { kOk = 0, kFailure = 1, kUsage = 2, kBudget = 3 };

/// Runs one `multitile` invocation. Command output goes to `out`,
/// diagnostics and the run manifest (without --manifest) to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace multitile::cli
