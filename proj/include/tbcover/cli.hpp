#ifndef TBCOVER_CLI_HPP
#define TBCOVER_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace tbcover {

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_input_error = 2 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tbcover

#endif  // TBCOVER_CLI_HPP
