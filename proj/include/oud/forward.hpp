#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "oud/parallel.hpp"
#include "oud/rng.hpp"
#include "oud/schedule.hpp"

namespace oud {

using Vec = std::vector<double>;

// One noising path: points[n] is the state at schedule index n, n = 0..N.
struct Trajectory {
  std::vector<Vec> points;
  int dim() const { return points.empty() ? 0 : static_cast<int>(points[0].size()); }
};

// State after time t in one jump: gamma(t) * x0 + beta(t) * z.
Vec closed_form_sample(const Vec& x0, double t, const Vec& z);

// One transition of the discretized process, index n -> n+1.
Vec recursive_step(const Vec& x_n, int n, const Vec& z, const NoiseSchedule& s);

// Full path from x0, drawing one normal vector per step.
Trajectory simulate_trajectory(const Vec& x0, const NoiseSchedule& s, RngStream& rng);

// Batch of paths, one RNG stream per trajectory; the parallel version
// writes each path into its own slot and is bitwise identical to the
// serial one for any worker count.
std::vector<Trajectory> simulate_batch(const std::vector<Vec>& x0s,
                                       const NoiseSchedule& s, std::uint64_t seed);
std::vector<Trajectory> simulate_batch_serial(const std::vector<Vec>& x0s,
                                              const NoiseSchedule& s, std::uint64_t seed);

// Monte Carlo estimate of mean and variance of the Ito integral
// int_a^b g(t) dW_t, used as an independent check of closed-form moments.
// Each path discretizes [a, b] into `substeps` increments on its own stream.
struct ItoEstimate {
  double mean = 0.0;
  double var = 0.0;
  std::int64_t n_paths = 0;
};

ItoEstimate ito_mc_oracle(const std::function<double(double)>& g, double a, double b,
                          int substeps, std::int64_t n_paths, std::uint64_t seed);
ItoEstimate ito_mc_oracle_serial(const std::function<double(double)>& g, double a, double b,
                                 int substeps, std::int64_t n_paths, std::uint64_t seed);

}  // namespace oud
