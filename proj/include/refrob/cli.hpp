#pragma once

#include <ostream>
#include <span>
#include <string>

namespace refrob::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command. `args` excludes the program name. Exit 0 when every
/// requested check passes, 1 on a failed check (a JSON failure record goes to
/// `err` in table mode), 2 on usage errors and unsupported groups.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace refrob::cli
