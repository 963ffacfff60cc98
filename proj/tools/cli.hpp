#ifndef DEFECT_CERT_TOOLS_CLI_HPP
#define DEFECT_CERT_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dcert::cli {

/// Exit codes shared by all subcommands. Scripts may branch on them.
enum ExitCode : int {
    kOk = 0,           ///< witness nonzero / reconstruct clean / certify zero
    kNegative = 1,     ///< witness singular / reconstruct degenerate / certify nonzero
    kUsage = 2,        ///< malformed input or arguments
    kUnresolved = 3,   ///< witness search exhausted / certify inconclusive
};

/// Runs the command line with argv[0] excluded. Payloads go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dcert::cli

#endif  // DEFECT_CERT_TOOLS_CLI_HPP
