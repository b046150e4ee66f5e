#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrng {

/// Process exit codes used by every command.
enum ExitCode : int { exit_ok = 0, exit_test_fail = 1, exit_usage = 2, exit_io = 3 };

/// Entry point of the `qrng` tool: simulate, extract, test, experiment, report.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Convenience overload; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qrng
