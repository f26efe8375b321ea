#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace corradapt::cli {

inline constexpr const char* tool_version = "0.1.0";

// Exit codes: 0 success, 1 usage/config error, 2 data/IO error.
inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_data = 2;

// Runs one command. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace corradapt::cli
