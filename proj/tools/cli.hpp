#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace smpds::cli {

// Runs the `smpds` command line with the given arguments (program name
// excluded). Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace smpds::cli
