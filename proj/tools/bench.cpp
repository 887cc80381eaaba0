// Times each parallel kernel against its serial twin and reports the
// largest output deviation between the two. Slot-writing kernels
// (simulate_batch, generate_batch, energy_distance, kde_1d) must match
// bitwise. The reduction kernels' serial references accumulate in a
// different order on purpose, so those rows may differ in the last digits;
// the parallel versions themselves are bitwise thread-count independent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "oud/data.hpp"
#include "oud/forward.hpp"
#include "oud/mlp.hpp"
#include "oud/parallel.hpp"
#include "oud/rng.hpp"
#include "oud/sampler.hpp"
#include "oud/schedule.hpp"
#include "oud/stats.hpp"

using namespace oud;

namespace {

template <class F>
double med3_ms(F&& f) {
  double runs[3];
  for (double& r : runs) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    r = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  std::sort(runs, runs + 3);
  return runs[1];
}

void row(const char* name, double serial_ms, double parallel_ms, double max_dev) {
  std::printf("%-18s %10.1f %12.1f %8.2fx %10.1e\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, max_dev);
}

double dev(double a, double b) { return std::abs(a - b); }

double dev(const std::vector<double>& a, const std::vector<double>& b) {
  double d = a.size() == b.size() ? 0.0 : HUGE_VAL;
  for (std::size_t i = 0; i < a.size() && d != HUGE_VAL; ++i)
    d = std::max(d, dev(a[i], b[i]));
  return d;
}

}  // namespace

int main() {
  std::printf("threads: %d (set OU_DIFFUSE_THREADS to change)\n\n", thread_count());
  std::printf("%-18s %10s %12s %9s %10s\n", "kernel", "serial ms", "parallel ms",
              "speedup", "max|diff|");

  {  // forward noising
    const NoiseSchedule s = build_schedule();
    std::vector<Vec> x0s(5000, Vec{1.5, -0.5});
    std::vector<Trajectory> a, b;
    const double ts = med3_ms([&] { a = simulate_batch_serial(x0s, s, 42); });
    const double tp = med3_ms([&] { b = simulate_batch(x0s, s, 42); });
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t n = 0; n < a[i].points.size(); ++n)
        d = std::max(d, dev(a[i].points[n], b[i].points[n]));
    row("simulate_batch", ts, tp, d);
  }

  {  // backprop over one large batch
    const MlpParams p = init_params({3, 64, 64, 2}, Activation::silu, 9);
    RngStream rng(10, streams::oracle(0));
    std::vector<TrainingExample> batch(4096);
    for (auto& ex : batch) {
      ex.x_next = {rng.next_normal(), rng.next_normal()};
      ex.t_feature = rng.next_uniform();
      ex.target = {rng.next_normal(), rng.next_normal()};
    }
    BatchGrad a, b;
    const double ts = med3_ms([&] { a = mlp_backward_serial(p, batch); });
    const double tp = med3_ms([&] { b = mlp_backward(p, batch); });
    double d = dev(a.loss, b.loss);
    for (std::size_t l = 0; l < a.grads.weights.size(); ++l) {
      d = std::max(d, dev(a.grads.weights[l], b.grads.weights[l]));
      d = std::max(d, dev(a.grads.biases[l], b.grads.biases[l]));
    }
    row("mlp_backward", ts, tp, d);
  }

  {  // reverse-chain generation with an untrained network
    NoiseModel m;
    m.net = init_params({3, 48, 48, 2}, Activation::silu, 11);
    m.schedule = build_schedule();
    m.scaler = identity_scaler(2);
    m.feature_names = {"u", "v"};
    GenerationConfig cfg;
    cfg.count = 500;
    cfg.seed = 21;
    SampleMatrix a, b;
    const double ts = med3_ms([&] { a = generate_batch_serial(m, cfg); });
    const double tp = med3_ms([&] { b = generate_batch(m, cfg); });
    row("generate_batch", ts, tp, dev(a.values, b.values));
  }

  {  // pairwise-distance statistic
    RngStream rng(12, streams::oracle(1));
    SampleMatrix x = make_matrix({"u", "v"});
    SampleMatrix y = make_matrix({"u", "v"});
    for (int i = 0; i < 2000; ++i) {
      x.add_row(std::vector<double>{rng.next_normal(), rng.next_normal()});
      y.add_row(std::vector<double>{rng.next_normal() + 0.2, rng.next_normal()});
    }
    double a = 0.0, b = 0.0;
    const double ts = med3_ms([&] { a = energy_distance_serial(x, y); });
    const double tp = med3_ms([&] { b = energy_distance(x, y); });
    row("energy_distance", ts, tp, dev(a, b));
  }

  {  // kernel density curve
    RngStream rng(13, streams::oracle(2));
    std::vector<double> samples(50000);
    for (double& v : samples) v = rng.next_normal();
    const std::vector<double> grid = make_grid(-4.0, 4.0, 512);
    KdeCurve a, b;
    const double ts = med3_ms([&] { a = kde_1d_serial(samples, grid); });
    const double tp = med3_ms([&] { b = kde_1d(samples, grid); });
    row("kde_1d", ts, tp, dev(a.density, b.density));
  }

  {  // stochastic-integral oracle
    const auto g = [](double u) { return std::exp(-u); };
    ItoEstimate a, b;
    const double ts =
        med3_ms([&] { a = ito_mc_oracle_serial(g, 0.0, 1.0, 200, 20000, 31); });
    const double tp = med3_ms([&] { b = ito_mc_oracle(g, 0.0, 1.0, 200, 20000, 31); });
    row("ito_mc_oracle", ts, tp, std::max(dev(a.mean, b.mean), dev(a.var, b.var)));
  }

  {  // moment reduction
    RngStream rng(14, streams::oracle(3));
    std::vector<double> xs(20'000'000);
    for (double& v : xs) v = rng.next_uniform();
    MeanVar a, b;
    const double ts = med3_ms([&] { a = mean_var_serial(xs); });
    const double tp = med3_ms([&] { b = mean_var(xs); });
    row("mean_var", ts, tp, std::max(dev(a.mean, b.mean), dev(a.var, b.var)));
  }

  return 0;
}
