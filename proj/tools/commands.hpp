#pragma once

#include <iosfwd>

namespace pairstat::cli {

// Exit status: 0 success, 2 input error (files, cells, flags, labels),
// 3 contract violation (kind mismatch, unsupported output, ...).
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitContract = 3;

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pairstat::cli
