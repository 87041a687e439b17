#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rdb2owl::cli {

// Entry point shared by the binary and the tests. `args` excludes the
// program name. Artifacts go to `out`, logs and errors to `err`.
// Exit codes: 0 success, 1 a check or property failed, 2 usage/input errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdb2owl::cli
