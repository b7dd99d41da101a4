#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scrambled::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitVerification = 3;

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);
int run(int argc, char **argv);

/// 12 significant digits, '.' decimal separator, "inf"/"nan" spelled out.
std::string format_number(double v);

}  // namespace scrambled::cli
