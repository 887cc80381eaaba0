#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "oud/model.hpp"
#include "oud/posterior.hpp"

namespace oud {

// How the reverse-step mean is assembled from the predictor's output.
enum class GenMethod { epsilon, x0_hat, mu_direct };

GenMethod method_from_name(const std::string& name);
std::string method_name(GenMethod m);
GenMethod default_method(PredictionTarget t);

// Predictor: network output at (x, n_next). Kept as a callable so tests can
// substitute exact oracles for the network.
using Predictor = std::function<Vec(const Vec& x, int n_next)>;

// Walk the reverse chain from x_N ~ N(0, I) in dimension `dim` down to x_0
// in standardized space. pred_kind names what the predictor returns; method
// names how the step mean is formed (a predicted epsilon can be converted
// to a predicted start point and vice versa, a predicted mean cannot be
// converted). The final step adds no noise: its variance is exactly zero.
Vec generate_one(const Predictor& predict, PredictionTarget pred_kind,
                 GenMethod method, int dim, const NoiseSchedule& s, RngStream& rng);

// Same walk, also recording the state at the requested indices.
std::vector<std::pair<int, Vec>> reverse_walk_snapshots(
    const Predictor& predict, PredictionTarget pred_kind, GenMethod method, int dim,
    const NoiseSchedule& s, RngStream& rng, const std::vector<int>& snapshot_at);

struct GenerationConfig {
  std::int64_t count = 1;
  std::uint64_t seed = 1;
  GenMethod method = GenMethod::epsilon;
};

// Batch generation in original data units (the model's scaler is inverted
// at the end). One RNG stream per sample, one output slot per sample:
// bitwise identical across worker counts, and the serial twin matches.
SampleMatrix generate_batch(const NoiseModel& m, const GenerationConfig& cfg);
SampleMatrix generate_batch_serial(const NoiseModel& m, const GenerationConfig& cfg);

// Snapshot batches in standardized space for timeline figures: for each
// requested index n, the states of all `count` reverse walks at n.
std::vector<std::pair<int, SampleMatrix>> generate_snapshots(
    const NoiseModel& m, std::int64_t count, std::uint64_t seed,
    const std::vector<int>& snapshot_at);

}  // namespace oud
