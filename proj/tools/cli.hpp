#pragma once

#include <iosfwd>

namespace leoacq::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kData = 2;

/// Runs the leoacq command line. Diagnostics go to `err`, help and summaries
/// to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace leoacq::cli
