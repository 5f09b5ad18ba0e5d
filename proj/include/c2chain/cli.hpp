#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace c2chain
{

// Runs the command-line tool on `args` (without the program name). Returns
// the process exit code: 0 success, 1 usage or validation error, 2 when
// `feasibility` finds the attack infeasible.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace c2chain
