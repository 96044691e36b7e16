#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace assaylens::cli {

// Stable exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNoMatch = 3; // also out-of-span readings

// Runs the command line given as (program name excluded) argument list.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace assaylens::cli
