#include "tribench/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tribench {

void parallel_for(std::size_t n, ExecMode mode,
                  const std::function<void(std::size_t)>& body) {
  if (mode == ExecMode::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
#ifdef _OPENMP
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    body(static_cast<std::size_t>(i));
  }
#else
  for (std::size_t i = 0; i < n; ++i) body(i);
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tribench
