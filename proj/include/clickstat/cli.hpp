#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace clickstat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (without the program name). Results go to `out`
/// unless `--output` names a file; diagnostics go to `err` as one line.
int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace clickstat::cli
