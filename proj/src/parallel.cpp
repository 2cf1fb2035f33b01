#include "qhgeo/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qhgeo {

int worker_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void configure_threads_from_env() {
  const char* env = std::getenv("QHGEO_THREADS");
  if (env == nullptr) return;
  const int n = std::atoi(env);
  if (n <= 0) return;
#ifdef _OPENMP
  omp_set_num_threads(n);
#endif
}

namespace detail {

void run_parallel(std::size_t n, void (*body)(void*, std::size_t), void* ctx,
                  std::vector<std::exception_ptr>& errors) {
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(ctx, static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
}

}  // namespace detail

}  // namespace qhgeo
