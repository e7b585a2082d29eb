#pragma once

#include <string>
#include <vector>

namespace toolforge::cli {

/// Exit codes: 0 success, 2 usage/config, 3 provider failure, 4 data decode.
int run(const std::vector<std::string>& args);
int run(int argc, char** argv);

}  // namespace toolforge::cli
