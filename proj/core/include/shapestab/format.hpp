#pragma once

#include <string>

namespace shapestab {

/// "%.17g": lossless round trip for doubles.
std::string format_double(double v);

}  // namespace shapestab
