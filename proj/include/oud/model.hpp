#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oud/data.hpp"
#include "oud/mlp.hpp"
#include "oud/schedule.hpp"

namespace oud {

enum class PredictionTarget { epsilon, x0, mu };

PredictionTarget target_from_name(const std::string& name);
std::string target_name(PredictionTarget t);

// How noised training inputs are drawn: one random step per data point per
// epoch (cheap, the default) or every step for every point.
enum class TimestepSampling { random_step, all_steps };

TimestepSampling timestep_sampling_from_name(const std::string& name);
std::string timestep_sampling_name(TimestepSampling t);

struct TrainConfig {
  PredictionTarget target = PredictionTarget::epsilon;
  std::vector<int> hidden_dims = {128, 128, 128};
  Activation activation = Activation::tanh;
  OptimizerKind optimizer = OptimizerKind::adam;
  double learning_rate = 1e-3;
  int epochs = 200;
  int batch_size = 128;
  std::uint64_t seed = 1;
  TimestepSampling timestep_sampling = TimestepSampling::random_step;
  // Noised inputs: closed-form jump to the sampled step (default), or a
  // literal simulated path with the noise recovered from its endpoints.
  bool literal_trajectories = false;
  // Stop early when the epoch loss has not improved by plateau_tol
  // (relative) for plateau_patience epochs; 0 disables.
  int plateau_patience = 0;
  double plateau_tol = 1e-3;
};

// Everything needed to reproduce generation: network, schedule, the scaler
// that standardized the training data, and the training configuration.
struct NoiseModel {
  MlpParams net;
  NoiseSchedule schedule;
  Scaler scaler;
  std::vector<std::string> feature_names;
  TrainConfig config;

  // Network output at state x (standardized space) and index n_next,
  // using the schedule's time fraction as the time feature.
  std::vector<double> predict(std::span<const double> x, int n_next) const;
};

inline constexpr int kModelFormatVersion = 1;
inline constexpr const char* kRngAlgorithm = "philox4x64-10";
inline constexpr const char* kNormalTransform = "box-muller";

// Versioned JSON bundle. Doubles round-trip exactly; saving a loaded model
// reproduces the file byte for byte. Loading rejects unknown versions and
// malformed bundles.
void save_model(const NoiseModel& m, const std::string& path);
NoiseModel load_model(const std::string& path);

}  // namespace oud
