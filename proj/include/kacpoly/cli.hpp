#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kacpoly {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitCheckFailed = 3;

/// Runs one subcommand. `args` excludes the program name. Payloads sent to
/// "-" go to `out`; diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace kacpoly
