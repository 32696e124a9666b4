#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tbg {

// Exit code 0: all checks pass. 1: at least one check failed.
// 2: bad flags, unreadable file, or spec parse error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace tbg
