#pragma once

#include <iosfwd>

namespace trustcalc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Entry point of the `trustcalc` tool. Successful commands print one JSON
/// document to `out`; human-readable summaries and diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace trustcalc::cli
