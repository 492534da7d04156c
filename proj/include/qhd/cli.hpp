#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qhd::cli {

/// Exit status: 0 success, 1 domain error (singular lattice, limits), 2 usage or input error.
auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int;

} // namespace qhd::cli
