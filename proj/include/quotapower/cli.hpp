#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace quotapower {

// Full command-line driver; `args` excludes the program name. Returns the
// process exit status: 0 success, 1 domain error, 2 usage error. All output
// goes to the given streams (or to files selected by --output), so tests can
// run the CLI in-process.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quotapower
