#pragma once

#include <iosfwd>

namespace langevin::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the langevin_lab tool. Subcommands: sample, bound, plan,
/// figure1, validate. Returns 0 on success, 1 on runtime failure and 2 on
/// invalid usage.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace langevin::cli
