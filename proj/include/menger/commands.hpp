#pragma once

// Command-line driver. Exit codes: 0 pass, 1 invariant failure, 2 input error.

#include <iosfwd>
#include <string>
#include <vector>

#include "menger/measure.hpp"

namespace menger {

inline constexpr int kExitPass = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitInput = 2;

/// "cx,cy,...:r".
Ball parse_ball(const std::string& text);

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace menger
