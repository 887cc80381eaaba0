#pragma once

#include <vector>

namespace oud {

// Decay and noise scale of the forward process over an interval of length t:
// gamma(t) = e^{-t},  beta(t) = sqrt(1 - e^{-2t}).
double gamma_of(double t);
double beta_of(double t);

struct ScheduleParams {
  int n_steps = 200;
  double b_min = 1e-4;
  double b_max = 0.2;
};

inline constexpr int kDefaultSteps = 200;
inline constexpr double kDefaultBetaMin = 1e-4;
inline constexpr double kDefaultBetaMax = 0.2;

// Discrete noising schedule. Per-step variances b_1..b_N are equally spaced
// in [b_min, b_max]; the step durations dt_n = -log(1 - b_n) / 2 make the
// one-step noise variance beta(dt_n)^2 equal b_n exactly.
//
// Cumulative coefficients are kept in squared form and built by the exact
// recurrences
//   E_{n+1} = E_n * (1 - b_{n+1})          (squared decay, E_0 = 1)
//   B_{n+1} = (1 - b_{n+1}) * B_n + b_{n+1} (squared noise,  B_0 = 0)
// so that step_gamma_sq(n) * cum_beta_sq(n) + step_beta_sq(n) equals
// cum_beta_sq(n+1) to within a few ulp. Deriving them by exponentiating the
// accumulated time would lose that identity to rounding in t.
class NoiseSchedule {
 public:
  NoiseSchedule() = default;

  int n_steps() const { return static_cast<int>(dt_.size()); }
  const ScheduleParams& params() const { return params_; }

  // Cumulative quantities at index n in [0, N].
  double time(int n) const { return cum(t_, n); }
  double cum_gamma(int n) const { return cum(cum_gamma_, n); }
  double cum_beta(int n) const { return cum(cum_beta_, n); }
  double cum_gamma_sq(int n) const { return cum(cum_gamma_sq_, n); }
  double cum_beta_sq(int n) const { return cum(cum_beta_sq_, n); }

  // Per-transition quantities for the step n -> n+1, n in [0, N-1].
  double dt(int n) const { return step(dt_, n); }
  double step_var(int n) const { return step(b_, n); }  // b_{n+1}
  double step_gamma(int n) const { return step(step_gamma_, n); }
  double step_beta(int n) const { return step(step_beta_, n); }
  double step_gamma_sq(int n) const { return step(step_gamma_sq_, n); }
  double step_beta_sq(int n) const { return step(step_beta_sq_, n); }

  // Fraction of total time elapsed at index n; the network's time feature.
  double time_fraction(int n) const { return time(n) / time(n_steps()); }

  // True when the terminal marginal is close to the standard normal
  // (cum_beta(N) >= 0.999); callers warn when it is not.
  bool terminal_close() const;

  friend NoiseSchedule build_schedule(int n_steps, double b_min, double b_max);

 private:
  double cum(const std::vector<double>& v, int n) const;
  double step(const std::vector<double>& v, int n) const;

  ScheduleParams params_;
  std::vector<double> b_;             // b_1..b_N
  std::vector<double> dt_;            // dt_1..dt_N
  std::vector<double> t_;             // t_0..t_N
  std::vector<double> step_gamma_, step_beta_, step_gamma_sq_, step_beta_sq_;
  std::vector<double> cum_gamma_, cum_beta_, cum_gamma_sq_, cum_beta_sq_;
};

NoiseSchedule build_schedule(int n_steps = kDefaultSteps,
                             double b_min = kDefaultBetaMin,
                             double b_max = kDefaultBetaMax);

}  // namespace oud
