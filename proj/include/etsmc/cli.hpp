#pragma once

namespace etsmc {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDivergence = 2;

/// Entry point of the `etsmc` tool: subcommands simulate, compare, report.
int cli_main(int argc, const char* const* argv);

}  // namespace etsmc
