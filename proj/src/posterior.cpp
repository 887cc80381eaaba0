#include "oud/posterior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oud {

namespace {

void check_dims(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

Vec posterior_mean(const Vec& x_next, const Vec& x0, int n, const NoiseSchedule& s) {
  check_dims(x_next, x0, "posterior_mean");
  const double bsq_next = s.cum_beta_sq(n + 1);
  const double c_next = s.step_gamma(n) * s.cum_beta_sq(n) / bsq_next;
  const double c_zero = s.cum_gamma(n) * s.step_beta_sq(n) / bsq_next;
  Vec out(x_next.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = c_next * x_next[i] + c_zero * x0[i];
  }
  return out;
}

double posterior_var(int n, const NoiseSchedule& s) {
  return s.step_beta_sq(n) * s.cum_beta_sq(n) / s.cum_beta_sq(n + 1);
}

PosteriorParams posterior_params(const Vec& x_next, const Vec& x0, int n,
                                 const NoiseSchedule& s) {
  PosteriorParams p;
  p.mean = posterior_mean(x_next, x0, n, s);
  p.stddev = std::sqrt(posterior_var(n, s));
  return p;
}

Vec eps_from_pair(const Vec& x_next, const Vec& x0, int n_next, const NoiseSchedule& s) {
  check_dims(x_next, x0, "eps_from_pair");
  if (n_next < 1) throw std::out_of_range("eps_from_pair: need n_next >= 1");
  const double g = s.cum_gamma(n_next);
  const double b = s.cum_beta(n_next);
  Vec out(x_next.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (x_next[i] - g * x0[i]) / b;
  return out;
}

Vec x0_from_eps(const Vec& x_next, const Vec& eps, int n_next, const NoiseSchedule& s) {
  check_dims(x_next, eps, "x0_from_eps");
  if (n_next < 1) throw std::out_of_range("x0_from_eps: need n_next >= 1");
  const double g = s.cum_gamma(n_next);
  const double b = s.cum_beta(n_next);
  Vec out(x_next.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (x_next[i] - b * eps[i]) / g;
  return out;
}

Vec mean_from_eps(const Vec& x_next, const Vec& eps, int n, const NoiseSchedule& s) {
  return posterior_mean(x_next, x0_from_eps(x_next, eps, n + 1, s), n, s);
}

Vec mean_from_x0_hat(const Vec& x_next, const Vec& x0_hat, int n, const NoiseSchedule& s) {
  return posterior_mean(x_next, x0_hat, n, s);
}

}  // namespace oud
