#pragma once

#include <span>

namespace shapestab {

/// Number of strict sign changes in `samples`. Exact zeros separate segments
/// and never count on their own, so [1, 0, -1] has one change and [1, 0, 1]
/// none.
int count_nodes(std::span<const double> samples);

}  // namespace shapestab
