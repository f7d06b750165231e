#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tdcast {

// Entry point behind the tdcast binary. `args` excludes the program name.
// Exit codes: 0 success, 1 configuration or data validation failure,
// 2 runtime or divergence failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tdcast
