#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cms {

// Runs the command-line tool on the given arguments (without argv[0]).
// Results go to `out`, diagnostics to `err`. Returns the process exit code:
// 0 success, 1 a requested check failed, 2 usage or input errors.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cms
