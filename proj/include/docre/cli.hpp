#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace docre {

// Entry point of the `docre` command. `args` excludes the program name.
// Input path "-" reads `in`; output defaults to `out`. Diagnostics go to `err`.
// Returns 0 iff no error was reported.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

}  // namespace docre
