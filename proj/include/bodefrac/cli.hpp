#pragma once

#include <string>
#include <vector>

namespace bodefrac {

// Batch front end. Exit codes are the machine contract: 0 pass, 1 input
// error, 2 verification mismatch.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace bodefrac
