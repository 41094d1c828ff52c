#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vocalscreen::cli {

// Exit codes: 0 success, 1 runtime failure (diagnostic on err), 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Convenience overload; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vocalscreen::cli
