// cli.hpp
// Command-line front end. Every command writes UTF-8 JSON with stable key
// order; `compare` additionally writes a CSV for plotting.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qfilter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

inline constexpr const char* kVersion = "0.1.0";

/// argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience wrapper; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qfilter::cli
