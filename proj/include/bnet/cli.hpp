#ifndef BNET_CLI_HPP
#define BNET_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace bnet::cli {

/// Runs one command line (args[0] is the program name). Results go to `out`
/// as a single JSON document; diagnostics go to `err`.
///
/// Exit codes: 0 success, 1 usage error, 2 model/validation error,
/// 3 impossible evidence or degenerate baseline, 4 size limit.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bnet::cli

#endif  // BNET_CLI_HPP
