#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace causalbounds::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitComputation = 2;

/// Runs one command. `args` excludes the program name. Human-readable output
/// goes to `out`, diagnostics and usage text to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 1 for input errors, 2 for computation errors and anything unexpected.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace causalbounds::cli
