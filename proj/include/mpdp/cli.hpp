#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mpdp {

/// Entry point of the `mpdp` tool. Subcommands: run, analyze, bound, describe.
/// Returns 0 on success, 1 on a failed computation, 2 on a usage or config error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace mpdp
