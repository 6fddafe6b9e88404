#ifndef THEORIA_CLI_HPP
#define THEORIA_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace theoria::cli {

// Full command dispatch against injected streams; `args` excludes the
// program name. Returns the process exit code: 0 success or expectation
// met, 1 expectation failed, 2 usage/parse/validation error, 3 I/O error.
int run_main(const std::vector<std::string>& args, std::istream& in,
             std::ostream& out, std::ostream& err);

}  // namespace theoria::cli

#endif  // THEORIA_CLI_HPP
