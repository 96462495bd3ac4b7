// SPDX-License-Identifier: Apache-2.0
#pragma once

// Include this instead of <omp.h> so the kernels still compile (serially)
// when OpenMP is disabled.
#if defined(_OPENMP)
#include <omp.h>
namespace sofar {
constexpr bool use_omp = true;
}
#else
#pragma GCC diagnostic ignored "-Wunknown-pragmas"
namespace sofar {
constexpr bool use_omp = false;
}
inline int omp_get_thread_num() { return 0; }
inline int omp_get_max_threads() { return 1; }
inline void omp_set_num_threads(int) {}
#endif

namespace sofar {

/// Worker-count hint handed down from the CLI. Zero means "runtime default".
struct Parallelism {
  int threads = 0;

  int resolve() const { return threads > 0 ? threads : omp_get_max_threads(); }
};

}  // namespace sofar
