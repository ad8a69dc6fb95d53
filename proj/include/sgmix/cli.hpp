#pragma once

#include <string>
#include <vector>

namespace sgmix {

// Full command-line entry point (argv without the program name).
// Exit codes: 0 success, 2 usage/config, 3 data, 4 convergence failure.
int run_cli(const std::vector<std::string>& args);

}  // namespace sgmix
