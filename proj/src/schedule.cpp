#include "oud/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace oud {

double gamma_of(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("gamma_of: t must be >= 0");
  return std::exp(-t);
}

double beta_of(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("beta_of: t must be >= 0");
  // 1 - e^{-2t} via expm1 keeps small t accurate.
  return std::sqrt(-std::expm1(-2.0 * t));
}

double NoiseSchedule::cum(const std::vector<double>& v, int n) const {
  if (n < 0 || n > n_steps()) {
    throw std::out_of_range("schedule index " + std::to_string(n) +
                            " outside [0, " + std::to_string(n_steps()) + "]");
  }
  return v[static_cast<std::size_t>(n)];
}

double NoiseSchedule::step(const std::vector<double>& v, int n) const {
  if (n < 0 || n >= n_steps()) {
    throw std::out_of_range("transition index " + std::to_string(n) +
                            " outside [0, " + std::to_string(n_steps()) + ")");
  }
  return v[static_cast<std::size_t>(n)];
}

bool NoiseSchedule::terminal_close() const { return cum_beta(n_steps()) >= 0.999; }

NoiseSchedule build_schedule(int n_steps, double b_min, double b_max) {
  if (n_steps < 2) throw std::invalid_argument("n_steps must be >= 2");
  if (!(b_min > 0.0) || !(b_max < 1.0) || !(b_min < b_max)) {
    throw std::invalid_argument("need 0 < b_min < b_max < 1, got b_min=" +
                                std::to_string(b_min) + " b_max=" + std::to_string(b_max));
  }

  NoiseSchedule s;
  s.params_ = {n_steps, b_min, b_max};
  const std::size_t n = static_cast<std::size_t>(n_steps);

  s.b_.resize(n);
  s.dt_.resize(n);
  s.step_gamma_.resize(n);
  s.step_beta_.resize(n);
  s.step_gamma_sq_.resize(n);
  s.step_beta_sq_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n - 1);
    const double b = b_min + frac * (b_max - b_min);
    s.b_[i] = b;
    // e^{-2 dt} = 1 - b exactly at this dt
    s.dt_[i] = -0.5 * std::log1p(-b);
    s.step_gamma_sq_[i] = 1.0 - b;
    s.step_beta_sq_[i] = b;
    s.step_gamma_[i] = std::sqrt(1.0 - b);
    s.step_beta_[i] = std::sqrt(b);
    if (i > 0 && !(s.b_[i] > s.b_[i - 1] && s.dt_[i] > s.dt_[i - 1])) {
      throw std::invalid_argument(
          "step variances too closely spaced to stay strictly increasing");
    }
  }

  s.t_.resize(n + 1);
  s.cum_gamma_.resize(n + 1);
  s.cum_beta_.resize(n + 1);
  s.cum_gamma_sq_.resize(n + 1);
  s.cum_beta_sq_.resize(n + 1);
  s.t_[0] = 0.0;
  s.cum_gamma_sq_[0] = 1.0;
  s.cum_beta_sq_[0] = 0.0;
  s.cum_gamma_[0] = 1.0;
  s.cum_beta_[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s.t_[i + 1] = s.t_[i] + s.dt_[i];
    s.cum_gamma_sq_[i + 1] = s.cum_gamma_sq_[i] * s.step_gamma_sq_[i];
    s.cum_beta_sq_[i + 1] = s.step_gamma_sq_[i] * s.cum_beta_sq_[i] + s.step_beta_sq_[i];
    s.cum_gamma_[i + 1] = std::sqrt(s.cum_gamma_sq_[i + 1]);
    s.cum_beta_[i + 1] = std::sqrt(s.cum_beta_sq_[i + 1]);
  }
  return s;
}

}  // namespace oud
