#pragma once

#include <vector>

#include "instance.hpp"

namespace fcsp::testutil {

// Advance x through the instance's full domain product; false when wrapped.
inline bool next_assignment(std::vector<int>& x, const Instance& inst) {
  int k = inst.var_count() - 1;
  while (k >= 0) {
    int& v = x[static_cast<size_t>(k)];
    if (++v < inst.domain(k + 1)) return true;
    v = 0;
    --k;
  }
  return false;
}

}  // namespace fcsp::testutil
