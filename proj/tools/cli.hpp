#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imbboost::cli {

// Runs one command line (args[0] is the program name). Returns the process
// exit code; 0 only when every output was written.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace imbboost::cli
