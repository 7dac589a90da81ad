#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collatz {

// Dispatches one CLI invocation (argv without the program name). Reports go
// to out, usage and error diagnostics to err. Exit status: 0 success,
// 1 domain error, 2 usage error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace collatz
