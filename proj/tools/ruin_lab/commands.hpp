#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ruinlab::cli {

// Runs one ruin-lab invocation. args[0] is the program name. Returns the exit
// code: 0 success, 1 invalid input, 2 a numerical gate failed.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruinlab::cli
