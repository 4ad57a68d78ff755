// cli.hpp — command-line front end; returns the process exit code

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace optoent {

// args excludes the program name. Normal output goes to out, diagnostics to
// err. Exit codes: 0 success, 2 configuration or usage error, 3 unstable
// system, 4 regime violation, 5 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace optoent
