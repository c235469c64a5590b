#include "shapestab/nodes.hpp"

namespace shapestab {

int count_nodes(std::span<const double> samples) {
  int changes = 0;
  int last_sign = 0;
  for (double v : samples) {
    const int s = (v > 0.0) - (v < 0.0);
    if (s == 0) continue;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  return changes;
}

}  // namespace shapestab
