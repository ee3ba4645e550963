#pragma once

#include <cstdint>
#include <iosfwd>

namespace chsh {

inline constexpr std::uint64_t kDefaultSeed = 20241014;

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitValidation = 3,
};

/// Entry point of the chsh-games tool; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace chsh
