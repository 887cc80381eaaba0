#include "oud/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "oud/forward.hpp"

namespace oud {

TrainingExample make_training_example(const Vec& x0, int n_next,
                                      PredictionTarget target,
                                      bool literal_trajectory,
                                      const NoiseSchedule& s, RngStream& rng) {
  if (n_next < 1 || n_next > s.n_steps()) {
    throw std::out_of_range("make_training_example: n_next outside [1, N]");
  }
  TrainingExample ex;
  ex.t_feature = s.time_fraction(n_next);
  Vec eps(x0.size());
  if (literal_trajectory) {
    // Walk the discrete path to n_next and recover the effective noise
    // from the endpoints; reproduces exactly what simulation would feed.
    Vec x = x0;
    Vec z(x0.size());
    for (int n = 0; n < n_next; ++n) {
      for (double& zi : z) zi = rng.next_normal();
      x = recursive_step(x, n, z, s);
    }
    ex.x_next = std::move(x);
    eps = eps_from_pair(ex.x_next, x0, n_next, s);
  } else {
    // Closed-form jump: x_next = cum_gamma * x0 + cum_beta * eps with the
    // drawn eps as the exact noise realization.
    for (double& e : eps) e = rng.next_normal();
    const double g = s.cum_gamma(n_next);
    const double b = s.cum_beta(n_next);
    ex.x_next.resize(x0.size());
    for (std::size_t i = 0; i < x0.size(); ++i) ex.x_next[i] = g * x0[i] + b * eps[i];
  }
  switch (target) {
    case PredictionTarget::epsilon:
      ex.target = std::move(eps);
      break;
    case PredictionTarget::x0:
      ex.target = x0;
      break;
    case PredictionTarget::mu:
      ex.target = posterior_mean(ex.x_next, x0, n_next - 1, s);
      break;
  }
  return ex;
}

std::pair<NoiseModel, TrainReport> train_model(const SampleMatrix& data,
                                               const NoiseSchedule& schedule,
                                               const TrainConfig& config,
                                               const Scaler& scaler) {
  if (data.rows == 0) throw std::invalid_argument("train_model: empty data");
  if (config.epochs < 1) throw std::invalid_argument("train_model: epochs must be >= 1");
  if (config.batch_size < 1) throw std::invalid_argument("train_model: batch_size must be >= 1");
  if (scaler.mean.size() != data.cols) {
    throw std::invalid_argument("train_model: scaler does not match data");
  }
  const auto t_start = std::chrono::steady_clock::now();

  const int d = static_cast<int>(data.cols);
  std::vector<int> dims;
  dims.push_back(d + 1);
  for (int h : config.hidden_dims) {
    if (h < 1) throw std::invalid_argument("hidden layer widths must be >= 1");
    dims.push_back(h);
  }
  dims.push_back(d);

  NoiseModel model;
  model.net = init_params(dims, config.activation, config.seed);
  model.schedule = schedule;
  model.scaler = scaler;
  model.feature_names = data.col_names;
  model.config = config;

  OptimizerConfig opt_cfg;
  opt_cfg.kind = config.optimizer;
  opt_cfg.learning_rate = config.learning_rate;
  OptimizerState opt = init_optimizer(model.net);

  const int N = schedule.n_steps();
  const std::size_t n_points = data.rows;
  const bool all_steps = config.timestep_sampling == TimestepSampling::all_steps;
  const std::size_t epoch_examples = all_steps ? n_points * static_cast<std::size_t>(N)
                                               : n_points;

  TrainReport report;
  double best_loss = std::numeric_limits<double>::infinity();
  int since_best = 0;

  std::vector<std::size_t> order(epoch_examples);
  std::vector<TrainingExample> batch;
  batch.reserve(static_cast<std::size_t>(config.batch_size));

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Examples are drawn from a stream keyed by (epoch, example index), so
    // the realized noise depends only on the config, not on batching.
    std::iota(order.begin(), order.end(), std::size_t{0});
    RngStream shuffle_rng(config.seed, streams::shuffle(static_cast<std::uint64_t>(epoch)));
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(shuffle_rng.next_u64() % i);
      std::swap(order[i - 1], order[j]);
    }

    double loss_sum = 0.0;
    std::size_t n_batches = 0;
    for (std::size_t pos = 0; pos < epoch_examples;) {
      const std::size_t take =
          std::min<std::size_t>(static_cast<std::size_t>(config.batch_size),
                                epoch_examples - pos);
      batch.clear();
      for (std::size_t k = 0; k < take; ++k) {
        const std::size_t idx = order[pos + k];
        const std::size_t point = all_steps ? idx / static_cast<std::size_t>(N) : idx;
        RngStream ex_rng(config.seed,
                         streams::training_example(static_cast<std::uint64_t>(epoch),
                                                   static_cast<std::uint64_t>(idx)));
        const int n_next = all_steps
                               ? static_cast<int>(idx % static_cast<std::size_t>(N)) + 1
                               : static_cast<int>(ex_rng.next_u64() %
                                                  static_cast<std::uint64_t>(N)) + 1;
        batch.push_back(make_training_example(data.row_vec(point), n_next, config.target,
                                              config.literal_trajectories, schedule,
                                              ex_rng));
      }
      const BatchGrad bg = mlp_backward(model.net, batch);
      optimizer_step(model.net, bg.grads, opt, opt_cfg);
      loss_sum += bg.loss;
      ++n_batches;
      pos += take;
    }

    const double epoch_loss = loss_sum / static_cast<double>(n_batches);
    report.epoch_loss.push_back(epoch_loss);
    report.epochs_run = epoch + 1;

    if (config.plateau_patience > 0) {
      if (epoch_loss < best_loss * (1.0 - config.plateau_tol)) {
        best_loss = epoch_loss;
        since_best = 0;
      } else {
        best_loss = std::min(best_loss, epoch_loss);
        if (++since_best >= config.plateau_patience) {
          report.plateau_stop = true;
          break;
        }
      }
    }
  }

  report.final_loss = report.epoch_loss.back();
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return {std::move(model), report};
}

}  // namespace oud
