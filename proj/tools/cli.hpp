#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace depbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitSizeCap = 3;
inline constexpr int kExitDomain = 4;
inline constexpr int kExitViolation = 5;

/// Runs one command line (without the program name). Results go to `out`
/// unless --out names a file, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace depbound::cli
