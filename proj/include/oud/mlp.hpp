#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "oud/rng.hpp"

namespace oud {

enum class Activation { tanh, silu };

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

// Fully connected network. layer_dims = {in, hidden..., out}; weights[l] is
// row-major (dims[l+1] x dims[l]). Hidden layers use the activation, the
// output layer is affine.
struct MlpParams {
  std::vector<int> layer_dims;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
  Activation activation = Activation::tanh;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int n_layers() const { return static_cast<int>(weights.size()); }
  std::size_t param_count() const;
};

// Weights ~ N(0, 1/fan_in) drawn row-major from one stream per layer;
// biases start at zero.
MlpParams init_params(const std::vector<int>& layer_dims, Activation act,
                      std::uint64_t seed);

void validate_params(const MlpParams& p);

// Input layout: the data vector followed by one time feature.
std::vector<double> mlp_forward(const MlpParams& p, std::span<const double> x,
                                double t_feature);

struct TrainingExample {
  std::vector<double> x_next;  // noised state (network input)
  double t_feature = 0.0;
  std::vector<double> target;
};

struct Gradients {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

Gradients zero_like(const MlpParams& p);

// Mean squared-error loss over the batch, 1/|B| * sum ||target - out||^2,
// and its gradient. The batch is split into fixed 16-example chunks;
// chunk gradients are accumulated in parallel and combined in chunk order,
// so the result is bitwise identical for any worker count. The serial
// version accumulates example by example and is the test reference.
struct BatchGrad {
  double loss = 0.0;
  Gradients grads;
};

BatchGrad mlp_backward(const MlpParams& p, std::span<const TrainingExample> batch);
BatchGrad mlp_backward_serial(const MlpParams& p, std::span<const TrainingExample> batch);

enum class OptimizerKind { adam, sgd };

OptimizerKind optimizer_from_name(const std::string& name);
std::string optimizer_name(OptimizerKind k);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct OptimizerState {
  Gradients m, v;  // first/second moment (adam only)
  std::int64_t step = 0;
};

OptimizerState init_optimizer(const MlpParams& p);

// One update in place. Throws if any gradient entry is non-finite.
void optimizer_step(MlpParams& p, const Gradients& g, OptimizerState& st,
                    const OptimizerConfig& cfg);

}  // namespace oud
