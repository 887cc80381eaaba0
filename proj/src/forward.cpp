#include "oud/forward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oud {

namespace {

void check_finite(const Vec& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void check_same_dim(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
}

}  // namespace

Vec closed_form_sample(const Vec& x0, double t, const Vec& z) {
  check_finite(x0, "x0");
  check_same_dim(x0, z, "closed_form_sample");
  const double g = gamma_of(t);
  const double b = beta_of(t);
  Vec out(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) out[i] = g * x0[i] + b * z[i];
  return out;
}

Vec recursive_step(const Vec& x_n, int n, const Vec& z, const NoiseSchedule& s) {
  check_same_dim(x_n, z, "recursive_step");
  const double g = s.step_gamma(n);
  const double b = s.step_beta(n);
  Vec out(x_n.size());
  for (std::size_t i = 0; i < x_n.size(); ++i) out[i] = g * x_n[i] + b * z[i];
  return out;
}

Trajectory simulate_trajectory(const Vec& x0, const NoiseSchedule& s, RngStream& rng) {
  check_finite(x0, "x0");
  Trajectory traj;
  traj.points.reserve(static_cast<std::size_t>(s.n_steps()) + 1);
  traj.points.push_back(x0);
  Vec z(x0.size());
  for (int n = 0; n < s.n_steps(); ++n) {
    for (double& zi : z) zi = rng.next_normal();
    traj.points.push_back(recursive_step(traj.points.back(), n, z, s));
  }
  return traj;
}

namespace {

std::vector<Trajectory> simulate_impl(const std::vector<Vec>& x0s,
                                      const NoiseSchedule& s, std::uint64_t seed,
                                      bool parallel) {
  std::vector<Trajectory> out(x0s.size());
  auto body = [&](std::int64_t i) {
    RngStream rng(seed, streams::trajectory(static_cast<std::uint64_t>(i)));
    out[static_cast<std::size_t>(i)] = simulate_trajectory(x0s[static_cast<std::size_t>(i)], s, rng);
  };
  const std::int64_t n = static_cast<std::int64_t>(x0s.size());
  if (parallel) {
    parallel_for(n, body);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return out;
}

ItoEstimate ito_impl(const std::function<double(double)>& g, double a, double b,
                     int substeps, std::int64_t n_paths, std::uint64_t seed,
                     bool parallel) {
  if (!(b > a)) throw std::invalid_argument("ito_mc_oracle: need b > a");
  if (substeps < 1 || n_paths < 1) {
    throw std::invalid_argument("ito_mc_oracle: substeps and n_paths must be >= 1");
  }
  const double h = (b - a) / substeps;
  const double sqrt_h = std::sqrt(h);
  std::vector<double> sums(static_cast<std::size_t>(n_paths));
  auto body = [&](std::int64_t p) {
    RngStream rng(seed, streams::oracle(static_cast<std::uint64_t>(p)));
    double acc = 0.0;
    for (int k = 0; k < substeps; ++k) {
      const double t = a + k * h;  // left endpoint, as the integral demands
      acc += g(t) * sqrt_h * rng.next_normal();
    }
    sums[static_cast<std::size_t>(p)] = acc;
  };
  if (parallel) {
    parallel_for(n_paths, body);
  } else {
    for (std::int64_t p = 0; p < n_paths; ++p) body(p);
  }
  const MeanVar mv = parallel ? mean_var(sums) : mean_var_serial(sums);
  return {mv.mean, mv.var, mv.count};
}

}  // namespace

std::vector<Trajectory> simulate_batch(const std::vector<Vec>& x0s,
                                       const NoiseSchedule& s, std::uint64_t seed) {
  return simulate_impl(x0s, s, seed, true);
}

std::vector<Trajectory> simulate_batch_serial(const std::vector<Vec>& x0s,
                                              const NoiseSchedule& s, std::uint64_t seed) {
  return simulate_impl(x0s, s, seed, false);
}

ItoEstimate ito_mc_oracle(const std::function<double(double)>& g, double a, double b,
                          int substeps, std::int64_t n_paths, std::uint64_t seed) {
  return ito_impl(g, a, b, substeps, n_paths, seed, true);
}

ItoEstimate ito_mc_oracle_serial(const std::function<double(double)>& g, double a,
                                 double b, int substeps, std::int64_t n_paths,
                                 std::uint64_t seed) {
  return ito_impl(g, a, b, substeps, n_paths, seed, false);
}

}  // namespace oud
