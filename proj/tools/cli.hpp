#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace msrss::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `msrss` invocation. `args` excludes the program name. Output
/// files go to --output when given, otherwise to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace msrss::cli
