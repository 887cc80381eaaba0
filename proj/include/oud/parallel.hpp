#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

namespace oud {

// Worker count: OU_DIFFUSE_THREADS pins it when set, otherwise the OpenMP
// default. Tests may pin an explicit value in-process; 0 clears the pin.
int thread_count();
void set_thread_override(int n);

// Parallel loop over [0, n). The body must only write to slots it owns
// (element i of an output array); under that contract results are bitwise
// identical for any worker count. An exception from the body would
// terminate the process if it crossed the region boundary, so the first
// one is caught and rethrown after the loop.
template <class F>
void parallel_for(std::int64_t n, F&& body) {
  const int nt = thread_count();
  std::exception_ptr first_error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(static) num_threads(nt)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

// Deterministic sum: terms are accumulated serially inside fixed-size
// chunks, chunk partials are computed in parallel and combined in chunk
// order. The grouping depends only on n, never on the worker count.
inline constexpr std::int64_t kSumChunk = 1024;

template <class F>
double chunked_sum(std::int64_t n, F&& term) {
  const std::int64_t n_chunks = (n + kSumChunk - 1) / kSumChunk;
  std::vector<double> partial(static_cast<std::size_t>(n_chunks), 0.0);
  parallel_for(n_chunks, [&](std::int64_t c) {
    const std::int64_t lo = c * kSumChunk;
    const std::int64_t hi = std::min(n, lo + kSumChunk);
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) acc += term(i);
    partial[static_cast<std::size_t>(c)] = acc;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased
  std::int64_t count = 0;
};

MeanVar mean_var(std::span<const double> xs);
MeanVar mean_var_serial(std::span<const double> xs);

}  // namespace oud
