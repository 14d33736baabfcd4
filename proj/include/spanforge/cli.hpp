#pragma once

#include <ostream>

namespace spanforge {

/// Entry point of the spanforge command line tool. Returns the process exit
/// status: 0 on success, 1 for malformed input, 2 for an infeasible request
/// (such as asking for a witness side that does not exist).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace spanforge
