#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace gcm::cli {

/// Runs one invocation; args excludes the program name. Returns the exit
/// code: 0 success or holds, 2 not applicable, 1 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gcm::cli
