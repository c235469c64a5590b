#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shapestab::cli {

/// Runs one command line (without the program name). Returns 0 on success,
/// 2 on usage errors and 1 on solver or I/O failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace shapestab::cli
