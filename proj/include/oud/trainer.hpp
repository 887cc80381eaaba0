#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oud/data.hpp"
#include "oud/model.hpp"
#include "oud/posterior.hpp"

namespace oud {

// Noise a standardized point to index n_next and package the network input
// with the target for the chosen prediction kind. The same draw is used
// for the noise and the target, so epsilon targets are exactly the z that
// produced x_next (closed-form path), or recovered from the pair (literal
// path).
TrainingExample make_training_example(const Vec& x0, int n_next,
                                      PredictionTarget target,
                                      bool literal_trajectory,
                                      const NoiseSchedule& s, RngStream& rng);

struct TrainReport {
  std::vector<double> epoch_loss;
  double final_loss = 0.0;
  int epochs_run = 0;
  bool plateau_stop = false;
  double wall_seconds = 0.0;
};

// Train a noise predictor on standardized data. Examples are drawn from
// per-(epoch, point) RNG streams and gradients are reduced in a fixed
// order, so the result depends only on the config, never on worker count.
// `data` must already be standardized with `scaler` (which is bundled into
// the returned model along with `feature_names`).
std::pair<NoiseModel, TrainReport> train_model(const SampleMatrix& data,
                                               const NoiseSchedule& schedule,
                                               const TrainConfig& config,
                                               const Scaler& scaler);

}  // namespace oud
