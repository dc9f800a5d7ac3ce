#pragma once
#include <ostream>

namespace henlab {

// exit codes: 0 ok, 2 configuration or domain error, 3 convergence failure
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace henlab
