#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flexlab::cli {

enum ExitCode { kOk = 0, kIdentityFailure = 1, kUsage = 2 };

// args excludes the program name. Reports go to out, diagnostics to err.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Tolerance from FLEXLAB_TOL, else the library default.
double default_tolerance();

}  // namespace flexlab::cli
