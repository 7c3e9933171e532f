#ifndef QDISTIL_CLI_APP_HPP
#define QDISTIL_CLI_APP_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace qdistil {

// Whole CLI behind a callable surface so tests can run subcommands
// in-process. `args` excludes the program name.
// Exit codes: 0 success, 2 input error, 3 capacity error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qdistil

#endif
