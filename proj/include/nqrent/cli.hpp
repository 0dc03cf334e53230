#pragma once

#include <string>
#include <vector>

namespace nqrent::cli {

/// Entry point behind main(). `args` excludes the program name.
/// Exit codes: 0 success, 1 computational failure, 2 usage error.
int run(const std::vector<std::string>& args);

}  // namespace nqrent::cli
