#pragma once

#include <ostream>

namespace suplab::cli {

// Exit codes of `run`.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Entry point of the `suplab` tool. Results go to `out`; the resolved
// configuration echo and diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace suplab::cli
