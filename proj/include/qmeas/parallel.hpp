#pragma once

#include <cstddef>
#include <cstdint>

#include <omp.h>

namespace qmeas {

/// Runs body(i) for i in [0, n) across OpenMP threads. threads <= 0 uses the
/// runtime default. The body must write only to slot i.
template <class Body>
void parallel_for_index(std::size_t n, int threads, Body&& body) {
  const int workers = threads > 0 ? threads : omp_get_max_threads();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16) num_threads(workers)
  for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

template <class Body>
void serial_for_index(std::size_t n, Body&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace qmeas
