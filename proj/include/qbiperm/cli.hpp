#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qbiperm::cli {

/// Exit codes: 0 success, 1 domain error, 2 usage or input-format error.
/// Errors are written to err as {"kind":...,"message":...}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qbiperm::cli
