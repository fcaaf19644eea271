#ifndef HILLCRACK_CLI_HPP
#define HILLCRACK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace hillcrack {

/// Runs one CLI invocation. `args` excludes the program name.
/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace hillcrack

#endif
