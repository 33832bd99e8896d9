#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pars3::cli {

// Exit statuses shared by every subcommand.
inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;  // bad flags, unreadable or malformed input

// Runs one command line. args[0] is the program name. Never throws; library
// errors are printed to `err` and mapped to an exit status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pars3::cli
