#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mln {

/// Entry point of the mlnet tool. args excludes the program name.
/// Exit codes: 0 success, 1 invalid input or failed command, 2 usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mln
