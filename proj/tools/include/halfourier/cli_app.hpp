#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace halfourier::cli {

// Dispatches one command-line invocation (argv without the program name).
// stdout traffic goes to `out`, diagnostics to `err`. Returns the process
// exit status: 0 success, 2 usage error, 1 computation failure.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace halfourier::cli
