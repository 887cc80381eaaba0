#include "oud/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "oud/parallel.hpp"

namespace oud {

namespace {

inline double act_value(Activation a, double z) {
  switch (a) {
    case Activation::tanh: return std::tanh(z);
    case Activation::silu: return z / (1.0 + std::exp(-z));
  }
  throw std::logic_error("unknown activation");
}

inline double act_deriv(Activation a, double z) {
  switch (a) {
    case Activation::tanh: {
      const double th = std::tanh(z);
      return 1.0 - th * th;
    }
    case Activation::silu: {
      const double s = 1.0 / (1.0 + std::exp(-z));
      return s * (1.0 + z * (1.0 - s));
    }
  }
  throw std::logic_error("unknown activation");
}

// Per-thread scratch for one example's forward/backward pass.
struct Scratch {
  std::vector<std::vector<double>> act;  // act[l], l = 0..L (act[0] = input)
  std::vector<std::vector<double>> pre;  // pre[l], l = 0..L-1
  std::vector<double> delta, delta_prev;

  explicit Scratch(const MlpParams& p) {
    const int L = p.n_layers();
    act.resize(static_cast<std::size_t>(L) + 1);
    pre.resize(static_cast<std::size_t>(L));
    int widest = 0;
    for (int l = 0; l <= L; ++l) {
      act[static_cast<std::size_t>(l)].resize(
          static_cast<std::size_t>(p.layer_dims[static_cast<std::size_t>(l)]));
      widest = std::max(widest, p.layer_dims[static_cast<std::size_t>(l)]);
    }
    for (int l = 0; l < L; ++l) {
      pre[static_cast<std::size_t>(l)].resize(
          static_cast<std::size_t>(p.layer_dims[static_cast<std::size_t>(l) + 1]));
    }
    delta.resize(static_cast<std::size_t>(widest));
    delta_prev.resize(static_cast<std::size_t>(widest));
  }
};

void forward_into(const MlpParams& p, std::span<const double> x, double t_feature,
                  Scratch& s) {
  auto& in = s.act[0];
  if (x.size() + 1 != in.size()) {
    throw std::invalid_argument("mlp_forward: input size " + std::to_string(x.size()) +
                                " + time feature != layer width " +
                                std::to_string(in.size()));
  }
  std::copy(x.begin(), x.end(), in.begin());
  in.back() = t_feature;
  const int L = p.n_layers();
  for (int l = 0; l < L; ++l) {
    const auto& W = p.weights[static_cast<std::size_t>(l)];
    const auto& b = p.biases[static_cast<std::size_t>(l)];
    const auto& a_in = s.act[static_cast<std::size_t>(l)];
    auto& z = s.pre[static_cast<std::size_t>(l)];
    auto& a_out = s.act[static_cast<std::size_t>(l) + 1];
    const std::size_t n_in = a_in.size(), n_out = a_out.size();
    for (std::size_t o = 0; o < n_out; ++o) {
      double acc = b[o];
      const double* w_row = &W[o * n_in];
      for (std::size_t i = 0; i < n_in; ++i) acc += w_row[i] * a_in[i];
      z[o] = acc;
      a_out[o] = (l + 1 < L) ? act_value(p.activation, acc) : acc;
    }
  }
}

// One example's squared error and gradient contribution (scaled by `scale`),
// accumulated into g.
double backward_one(const MlpParams& p, const TrainingExample& ex, double scale,
                    Scratch& s, Gradients& g) {
  forward_into(p, ex.x_next, ex.t_feature, s);
  const int L = p.n_layers();
  const auto& out = s.act[static_cast<std::size_t>(L)];
  if (ex.target.size() != out.size()) {
    throw std::invalid_argument("training example target has wrong dimension");
  }
  double sq = 0.0;
  for (std::size_t o = 0; o < out.size(); ++o) {
    const double r = out[o] - ex.target[o];
    sq += r * r;
    s.delta[o] = 2.0 * r * scale;
  }
  for (int l = L - 1; l >= 0; --l) {
    const auto& a_in = s.act[static_cast<std::size_t>(l)];
    const auto& W = p.weights[static_cast<std::size_t>(l)];
    auto& gw = g.weights[static_cast<std::size_t>(l)];
    auto& gb = g.biases[static_cast<std::size_t>(l)];
    const std::size_t n_in = a_in.size();
    const std::size_t n_out = s.pre[static_cast<std::size_t>(l)].size();
    for (std::size_t o = 0; o < n_out; ++o) {
      const double d = s.delta[o];
      gb[o] += d;
      double* gw_row = &gw[o * n_in];
      for (std::size_t i = 0; i < n_in; ++i) gw_row[i] += d * a_in[i];
    }
    if (l > 0) {
      const auto& z_prev = s.pre[static_cast<std::size_t>(l) - 1];
      for (std::size_t i = 0; i < n_in; ++i) {
        double acc = 0.0;
        for (std::size_t o = 0; o < n_out; ++o) acc += W[o * n_in + i] * s.delta[o];
        s.delta_prev[i] = acc * act_deriv(p.activation, z_prev[i]);
      }
      std::swap(s.delta, s.delta_prev);
    }
  }
  return sq;
}

void add_into(Gradients& dst, const Gradients& src) {
  for (std::size_t l = 0; l < dst.weights.size(); ++l) {
    auto& dw = dst.weights[l];
    const auto& sw = src.weights[l];
    for (std::size_t i = 0; i < dw.size(); ++i) dw[i] += sw[i];
    auto& db = dst.biases[l];
    const auto& sb = src.biases[l];
    for (std::size_t i = 0; i < db.size(); ++i) db[i] += sb[i];
  }
}

// Chunk layout is fixed by the batch size alone so the reduction order
// never depends on the worker count.
constexpr std::size_t kGradChunk = 16;
constexpr std::size_t kGradWindow = 32;  // chunks held in memory at once

}  // namespace

std::size_t MlpParams::param_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

Activation activation_from_name(const std::string& name) {
  if (name == "tanh") return Activation::tanh;
  if (name == "silu") return Activation::silu;
  throw std::invalid_argument("unknown activation '" + name + "' (tanh, silu)");
}

std::string activation_name(Activation a) {
  return a == Activation::tanh ? "tanh" : "silu";
}

OptimizerKind optimizer_from_name(const std::string& name) {
  if (name == "adam") return OptimizerKind::adam;
  if (name == "sgd") return OptimizerKind::sgd;
  throw std::invalid_argument("unknown optimizer '" + name + "' (adam, sgd)");
}

std::string optimizer_name(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "sgd";
}

void validate_params(const MlpParams& p) {
  if (p.layer_dims.size() < 2) throw std::invalid_argument("network needs >= 2 layer dims");
  for (int d : p.layer_dims) {
    if (d < 1) throw std::invalid_argument("layer widths must be >= 1");
  }
  if (p.weights.size() != p.layer_dims.size() - 1 || p.biases.size() != p.weights.size()) {
    throw std::invalid_argument("layer count mismatch between dims and parameters");
  }
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    const std::size_t n_in = static_cast<std::size_t>(p.layer_dims[l]);
    const std::size_t n_out = static_cast<std::size_t>(p.layer_dims[l + 1]);
    if (p.weights[l].size() != n_in * n_out || p.biases[l].size() != n_out) {
      throw std::invalid_argument("parameter shapes do not match layer dims");
    }
    for (double w : p.weights[l]) {
      if (!std::isfinite(w)) throw std::invalid_argument("non-finite weight");
    }
    for (double b : p.biases[l]) {
      if (!std::isfinite(b)) throw std::invalid_argument("non-finite bias");
    }
  }
}

MlpParams init_params(const std::vector<int>& layer_dims, Activation act,
                      std::uint64_t seed) {
  MlpParams p;
  p.layer_dims = layer_dims;
  p.activation = act;
  if (layer_dims.size() < 2) throw std::invalid_argument("network needs >= 2 layer dims");
  p.weights.resize(layer_dims.size() - 1);
  p.biases.resize(layer_dims.size() - 1);
  for (std::size_t l = 0; l + 1 < layer_dims.size(); ++l) {
    const std::size_t n_in = static_cast<std::size_t>(layer_dims[l]);
    const std::size_t n_out = static_cast<std::size_t>(layer_dims[l + 1]);
    if (layer_dims[l] < 1 || layer_dims[l + 1] < 1) {
      throw std::invalid_argument("layer widths must be >= 1");
    }
    RngStream rng(seed, streams::weight_init(l));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_in));
    auto& W = p.weights[l];
    W.resize(n_in * n_out);
    for (double& w : W) w = scale * rng.next_normal();
    p.biases[l].assign(n_out, 0.0);
  }
  return p;
}

std::vector<double> mlp_forward(const MlpParams& p, std::span<const double> x,
                                double t_feature) {
  Scratch s(p);
  forward_into(p, x, t_feature, s);
  return s.act[static_cast<std::size_t>(p.n_layers())];
}

Gradients zero_like(const MlpParams& p) {
  Gradients g;
  g.weights.resize(p.weights.size());
  g.biases.resize(p.biases.size());
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    g.weights[l].assign(p.weights[l].size(), 0.0);
    g.biases[l].assign(p.biases[l].size(), 0.0);
  }
  return g;
}

BatchGrad mlp_backward_serial(const MlpParams& p, std::span<const TrainingExample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  BatchGrad r;
  r.grads = zero_like(p);
  Scratch s(p);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double sq_sum = 0.0;
  for (const auto& ex : batch) sq_sum += backward_one(p, ex, scale, s, r.grads);
  r.loss = sq_sum * scale;
  return r;
}

BatchGrad mlp_backward(const MlpParams& p, std::span<const TrainingExample> batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  BatchGrad r;
  r.grads = zero_like(p);
  const std::size_t n = batch.size();
  const double scale = 1.0 / static_cast<double>(n);
  const std::size_t n_chunks = (n + kGradChunk - 1) / kGradChunk;

  std::vector<Gradients> chunk_grads(std::min(n_chunks, kGradWindow));
  std::vector<double> chunk_sq(n_chunks, 0.0);
  for (auto& g : chunk_grads) g = zero_like(p);

  for (std::size_t w0 = 0; w0 < n_chunks; w0 += kGradWindow) {
    const std::size_t w1 = std::min(n_chunks, w0 + kGradWindow);
    parallel_for(static_cast<std::int64_t>(w1 - w0), [&](std::int64_t k) {
      const std::size_t c = w0 + static_cast<std::size_t>(k);
      auto& g = chunk_grads[static_cast<std::size_t>(k)];
      Scratch s(p);
      const std::size_t lo = c * kGradChunk;
      const std::size_t hi = std::min(n, lo + kGradChunk);
      double sq = 0.0;
      for (std::size_t i = lo; i < hi; ++i) sq += backward_one(p, batch[i], scale, s, g);
      chunk_sq[c] = sq;
    });
    for (std::size_t k = 0; k < w1 - w0; ++k) {
      add_into(r.grads, chunk_grads[k]);
      if (w0 + kGradWindow < n_chunks) {
        for (auto& v : chunk_grads[k].weights) std::fill(v.begin(), v.end(), 0.0);
        for (auto& v : chunk_grads[k].biases) std::fill(v.begin(), v.end(), 0.0);
      }
    }
  }
  double sq_sum = 0.0;
  for (double s : chunk_sq) sq_sum += s;
  r.loss = sq_sum * scale;
  return r;
}

OptimizerState init_optimizer(const MlpParams& p) {
  OptimizerState st;
  st.m = zero_like(p);
  st.v = zero_like(p);
  st.step = 0;
  return st;
}

void optimizer_step(MlpParams& p, const Gradients& g, OptimizerState& st,
                    const OptimizerConfig& cfg) {
  for (std::size_t l = 0; l < g.weights.size(); ++l) {
    for (double x : g.weights[l]) {
      if (!std::isfinite(x)) throw std::runtime_error("non-finite gradient; diverged");
    }
    for (double x : g.biases[l]) {
      if (!std::isfinite(x)) throw std::runtime_error("non-finite gradient; diverged");
    }
  }
  if (cfg.kind == OptimizerKind::sgd) {
    for (std::size_t l = 0; l < p.weights.size(); ++l) {
      auto& W = p.weights[l];
      const auto& gw = g.weights[l];
      for (std::size_t i = 0; i < W.size(); ++i) W[i] -= cfg.learning_rate * gw[i];
      auto& b = p.biases[l];
      const auto& gb = g.biases[l];
      for (std::size_t i = 0; i < b.size(); ++i) b[i] -= cfg.learning_rate * gb[i];
    }
    ++st.step;
    return;
  }
  ++st.step;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.step));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.step));
  auto update = [&](std::vector<double>& theta, const std::vector<double>& grad,
                    std::vector<double>& m, std::vector<double>& v) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
      const double mh = m[i] / bc1;
      const double vh = v[i] / bc2;
      theta[i] -= cfg.learning_rate * mh / (std::sqrt(vh) + cfg.eps);
    }
  };
  for (std::size_t l = 0; l < p.weights.size(); ++l) {
    update(p.weights[l], g.weights[l], st.m.weights[l], st.v.weights[l]);
    update(p.biases[l], g.biases[l], st.m.biases[l], st.v.biases[l]);
  }
}

}  // namespace oud
