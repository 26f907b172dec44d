#pragma once

#include <ostream>

namespace sik {

/// Runs the sik command line. Exit codes: 0 ok or consistent, 1 usage or input error, 2 contradiction or violation.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sik
