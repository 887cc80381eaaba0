#include "oud/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace oud {

namespace {

std::atomic<int> g_override{0};

int env_thread_cap() {
  const char* v = std::getenv("OU_DIFFUSE_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  char* end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (end == nullptr || *end != '\0' || n < 1) {
    throw std::runtime_error("OU_DIFFUSE_THREADS must be a positive integer, got '" +
                             std::string(v) + "'");
  }
  return static_cast<int>(n);
}

}  // namespace

int thread_count() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o > 0) return o;
  const int cap = env_thread_cap();
  if (cap > 0) return cap;
  return omp_get_max_threads();
}

void set_thread_override(int n) { g_override.store(n, std::memory_order_relaxed); }

MeanVar mean_var(std::span<const double> xs) {
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  if (n == 0) return {};
  const double sum = chunked_sum(n, [&](std::int64_t i) { return xs[i]; });
  const double mean = sum / static_cast<double>(n);
  const double ss =
      chunked_sum(n, [&](std::int64_t i) { return (xs[i] - mean) * (xs[i] - mean); });
  MeanVar r;
  r.mean = mean;
  r.var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  r.count = n;
  return r;
}

MeanVar mean_var_serial(std::span<const double> xs) {
  const std::int64_t n = static_cast<std::int64_t>(xs.size());
  if (n == 0) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  MeanVar r;
  r.mean = mean;
  r.var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  r.count = n;
  return r;
}

}  // namespace oud
