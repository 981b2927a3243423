#pragma once

#include <cstddef>
#include <vector>

namespace gflt {

// Fixed-order pairwise summation. All scalar reductions in the library go
// through this so that results are independent of any loop parallelisation
// and reproducible run to run.
template <typename T>
T pairwise_sum(const std::vector<T>& v) {
  if (v.empty()) return T{};
  std::vector<T> work(v);
  std::size_t n = work.size();
  while (n > 1) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) work[i] = work[2 * i] + work[2 * i + 1];
    if (n % 2 == 1) {
      work[half] = work[n - 1];
      n = half + 1;
    } else {
      n = half;
    }
  }
  return work[0];
}

}  // namespace gflt
