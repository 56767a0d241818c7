#ifndef CARPET_CLI_HPP
#define CARPET_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

#include "carpet/error.hpp"

namespace carpet {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;   // input, validation, precision, unsupported
inline constexpr int kExitResource = 2;  // cap or budget exceeded
inline constexpr int kExitUsage = 64;
inline constexpr int kExitInternal = 70;

int exit_code(ErrorKind kind);

/// Runs one carpetdim invocation. args excludes the program name. The report
/// goes to out (or the --out file), diagnostics and usage text to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace carpet

#endif  // CARPET_CLI_HPP
