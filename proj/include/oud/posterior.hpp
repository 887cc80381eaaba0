#pragma once

#include "oud/forward.hpp"
#include "oud/schedule.hpp"

namespace oud {

// Exact reverse-transition law of the discretized process: given the state
// x_{n+1} at index n+1 and the start point x0, the state at index n is
// normal with
//   mean = step_gamma(n) * cum_beta_sq(n) / cum_beta_sq(n+1) * x_{n+1}
//        + cum_gamma(n) * step_beta_sq(n) / cum_beta_sq(n+1) * x0
//   var  = step_beta_sq(n) * cum_beta_sq(n) / cum_beta_sq(n+1)
// At n = 0 this collapses to (x0, 0) exactly.
Vec posterior_mean(const Vec& x_next, const Vec& x0, int n, const NoiseSchedule& s);
double posterior_var(int n, const NoiseSchedule& s);

struct PosteriorParams {
  Vec mean;
  double stddev = 0.0;
};
PosteriorParams posterior_params(const Vec& x_next, const Vec& x0, int n,
                                 const NoiseSchedule& s);

// Reparameterizations between the three prediction targets. Index n_next
// is the noised state's own index (so these divide by cum_* at n_next).
Vec eps_from_pair(const Vec& x_next, const Vec& x0, int n_next, const NoiseSchedule& s);
Vec x0_from_eps(const Vec& x_next, const Vec& eps, int n_next, const NoiseSchedule& s);

// Posterior mean for the step (n+1) -> n written in terms of a predicted
// noise vector or predicted start point.
Vec mean_from_eps(const Vec& x_next, const Vec& eps, int n, const NoiseSchedule& s);
Vec mean_from_x0_hat(const Vec& x_next, const Vec& x0_hat, int n, const NoiseSchedule& s);

}  // namespace oud
