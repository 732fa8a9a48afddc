#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hcr::cli {

/// Exit codes of the hcr tool.
enum ExitCode : int
{
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kNumericError = 3,
};

/// Runs one command line (without the program name). Diagnostics go to err
/// as a single line; progress and notices go to out.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

/// "0..10" or "0,1,2" or "0.5,2"; ranges step by one.
std::vector<double> parse_number_list(const std::string& text);

} // namespace hcr::cli
