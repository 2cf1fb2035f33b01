#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace qhgeo {

/// Execution policy for the index-parallel kernels. `serial` is the reference
/// path; both produce bit-identical results because every iteration writes
/// only its own slot and reductions happen afterwards in index order.
enum class Exec { serial, parallel };

/// Worker count used by parallel kernels (QHGEO_THREADS, else the OpenMP default).
int worker_count();

/// Applies QHGEO_THREADS to the OpenMP runtime. Called once by the CLI and the test mains.
void configure_threads_from_env();

namespace detail {
void run_parallel(std::size_t n, void (*body)(void*, std::size_t), void* ctx,
                  std::vector<std::exception_ptr>& errors);
}

/// Calls f(i) for i in [0, n). Exceptions are collected per index and the
/// lowest-index one is rethrown after the loop.
template <class F>
void parallel_for(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  auto body = [](void* ctx, std::size_t i) { (*static_cast<F*>(ctx))(i); };
  detail::run_parallel(n, body, static_cast<void*>(&f), errors);
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Maps f over [0, n) into a vector, in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); }, exec);
  return out;
}

}  // namespace qhgeo
