#pragma once

#include <iosfwd>

namespace sigtree::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitManifestMismatch = 3;

// Subcommands: analyze, box, solve, demo, table1. Reports go to `out`,
// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sigtree::cli
