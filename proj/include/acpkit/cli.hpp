#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace acp::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNotEqual = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitParse = 4;

/// Runs one `acpkit` command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace acp::cli
