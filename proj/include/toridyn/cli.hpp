#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toridyn::cli {

/// Exit codes: 0 success, 2 usage or malformed input, 3 domain error. Every
/// result, including errors, is printed to `out` as JSON.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace toridyn::cli
