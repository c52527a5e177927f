#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace zz {

/// Exit codes: 0 success, 1 usage or input error, 2 ladder failure
/// (solve), 3 verification failure (verify).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace zz
