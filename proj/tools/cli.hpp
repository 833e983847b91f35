#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rbslip::cli {

/// Exit status: 0 success, 1 domain error, 2 usage error.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

/// Runs the command line `args` (without the program name).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rbslip::cli
