#pragma once
// command line front end. run_cli is main() minus the process boundary so
// tests can drive every subcommand in-process and check exit codes and output.

#include <iosfwd>
#include <string>
#include <vector>

namespace noc {

// args exclude the program name, in natural order.
// exit codes: 0 success, 2 bad configuration or arguments, 3 simulation fault.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace noc
