#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relgeo::cli {

// Exit codes: 0 all checks passed, 1 usage or input error, 2 at least one
// residual/inequality failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

} // namespace relgeo::cli
