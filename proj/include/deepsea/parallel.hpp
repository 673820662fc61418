#pragma once

#include <omp.h>

namespace deepsea {

/// Worker count used by every parallel loop in the library. Results never
/// depend on it.
inline void set_thread_count(int n) {
  if (n >= 1) omp_set_num_threads(n);
}
inline int thread_count() { return omp_get_max_threads(); }

/// Runs body(v) for v in [0, rows). Each iteration must only write state
/// owned by row v.
template <typename F>
void parallel_rows(int rows, F&& body) {
#pragma omp parallel for schedule(dynamic, 4)
  for (int v = 0; v < rows; ++v) body(v);
}

}  // namespace deepsea
