#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "oud/parallel.hpp"
#include "oud/posterior.hpp"

using namespace oud;
using doctest::Approx;

TEST_CASE("posterior mean and variance match hand-computed values") {
  const NoiseSchedule s = build_schedule(3, 0.1, 0.3);
  // n = 1: coefficients sqrt(0.8)*0.1/0.28 and sqrt(0.9)*0.2/0.28
  const Vec mean = posterior_mean({1.2}, {0.5}, 1, s);
  CHECK(mean[0] == Approx(0.7221414025894332).epsilon(1e-15));
  CHECK(posterior_var(1, s) == Approx(0.07142857142857142).epsilon(1e-15));

  const PosteriorParams p = posterior_params({1.2}, {0.5}, 1, s);
  CHECK(p.mean[0] == mean[0]);
  CHECK(p.stddev == Approx(std::sqrt(0.07142857142857142)).epsilon(1e-15));
}

TEST_CASE("final reverse step is degenerate at the start point") {
  for (const auto& [N, bmin, bmax] :
       {std::tuple{3, 0.1, 0.3}, std::tuple{200, 1e-4, 0.2}, std::tuple{2, 0.5, 0.9}}) {
    const NoiseSchedule s = build_schedule(N, bmin, bmax);
    const Vec x0 = {0.37, -1.25};
    const Vec x1 = {5.0, -3.0};
    CHECK(posterior_mean(x1, x0, 0, s) == x0);  // exact, not approximate
    CHECK(posterior_var(0, s) == 0.0);
  }
}

TEST_CASE("noise and start-point reparameterizations invert each other") {
  const NoiseSchedule s = build_schedule(3, 0.1, 0.3);
  const Vec x0 = {0.5, -0.8};
  const Vec eps = {1.3, -0.2};
  for (int n_next = 1; n_next <= 3; ++n_next) {
    // forge x_next from (x0, eps), then recover each from the other
    Vec x_next(2);
    for (std::size_t i = 0; i < 2; ++i) {
      x_next[i] = s.cum_gamma(n_next) * x0[i] + s.cum_beta(n_next) * eps[i];
    }
    const Vec eps_rec = eps_from_pair(x_next, x0, n_next, s);
    const Vec x0_rec = x0_from_eps(x_next, eps, n_next, s);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(eps_rec[i] == Approx(eps[i]).epsilon(1e-13));
      CHECK(x0_rec[i] == Approx(x0[i]).epsilon(1e-13));
    }
  }
  CHECK(eps_from_pair({1.2}, {0.5}, 2, s)[0] == Approx(1.46600311231809).epsilon(1e-14));

  // hand value: b_1 = 0.36 gives cum_gamma(1) = 0.8, cum_beta(1) = 0.6
  const NoiseSchedule two = build_schedule(2, 0.36, 0.75);
  CHECK(x0_from_eps({1.0}, {1.0}, 1, two)[0] == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("mean written via predicted noise or start point equals the direct form") {
  const NoiseSchedule s = build_schedule(5, 0.05, 0.4);
  const Vec x0 = {1.1, -0.3};
  const Vec eps = {-0.7, 0.25};
  for (int n = 0; n < 5; ++n) {
    Vec x_next(2);
    for (std::size_t i = 0; i < 2; ++i) {
      x_next[i] = s.cum_gamma(n + 1) * x0[i] + s.cum_beta(n + 1) * eps[i];
    }
    const Vec direct = posterior_mean(x_next, x0, n, s);
    const Vec via_eps = mean_from_eps(x_next, eps, n, s);
    const Vec via_x0 = mean_from_x0_hat(x_next, x0, n, s);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(via_eps[i] == Approx(direct[i]).epsilon(1e-12));
      CHECK(via_x0[i] == Approx(direct[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("conditional simulation reproduces the posterior law") {
  // Simulate the three-step chain many times, condition on the state at
  // index 2 landing in a narrow bin, and compare the conditional moments of
  // the state at index 1 with the formulas. The conditional mean is linear
  // in x_2, so plugging the realized bin mean into the formula removes the
  // binning bias; the bin's own spread inflates the variance by c^2 * var.
  const NoiseSchedule s = build_schedule(3, 0.1, 0.3);
  const double x0 = 0.8;
  const double target = 0.9, half_width = 0.025;
  const std::size_t M = 400000;

  std::vector<double> x1_hits, x2_hits;
  RngStream rng(314, 0);
  for (std::size_t m = 0; m < M; ++m) {
    const double x1 = s.step_gamma(0) * x0 + s.step_beta(0) * rng.next_normal();
    const double x2 = s.step_gamma(1) * x1 + s.step_beta(1) * rng.next_normal();
    if (std::abs(x2 - target) < half_width) {
      x1_hits.push_back(x1);
      x2_hits.push_back(x2);
    }
  }
  REQUIRE(x1_hits.size() > 5000);

  const MeanVar bin = mean_var(x2_hits);
  const MeanVar got = mean_var(x1_hits);

  const double c_next = s.step_gamma(1) * s.cum_beta_sq(1) / s.cum_beta_sq(2);
  const Vec want_mean = posterior_mean({bin.mean}, {x0}, 1, s);
  const double want_var = posterior_var(1, s) + c_next * c_next * bin.var;

  const double n_hits = static_cast<double>(x1_hits.size());
  const double se_mean = std::sqrt(want_var / n_hits);
  const double se_var = want_var * std::sqrt(2.0 / n_hits);
  CHECK(std::abs(got.mean - want_mean[0]) < 5.0 * se_mean);
  CHECK(std::abs(got.var - want_var) < 5.0 * se_var);
}

TEST_CASE("posterior input validation") {
  const NoiseSchedule s = build_schedule(3, 0.1, 0.3);
  CHECK_THROWS_AS(posterior_mean({1.0}, {1.0, 2.0}, 1, s), std::invalid_argument);
  CHECK_THROWS_AS(posterior_var(3, s), std::out_of_range);
  CHECK_THROWS_AS(eps_from_pair({1.0}, {1.0}, 0, s), std::out_of_range);
  CHECK_THROWS_AS(x0_from_eps({1.0}, {1.0}, 0, s), std::out_of_range);
}
