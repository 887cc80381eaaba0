#include "oud/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oud/parallel.hpp"

namespace oud {

GenMethod method_from_name(const std::string& name) {
  if (name == "epsilon") return GenMethod::epsilon;
  if (name == "x0-hat") return GenMethod::x0_hat;
  if (name == "mu-direct") return GenMethod::mu_direct;
  throw std::invalid_argument("unknown generation method '" + name +
                              "' (epsilon, x0-hat, mu-direct)");
}

std::string method_name(GenMethod m) {
  switch (m) {
    case GenMethod::epsilon: return "epsilon";
    case GenMethod::x0_hat: return "x0-hat";
    case GenMethod::mu_direct: return "mu-direct";
  }
  throw std::logic_error("unknown method");
}

GenMethod default_method(PredictionTarget t) {
  switch (t) {
    case PredictionTarget::epsilon: return GenMethod::epsilon;
    case PredictionTarget::x0: return GenMethod::x0_hat;
    case PredictionTarget::mu: return GenMethod::mu_direct;
  }
  throw std::logic_error("unknown target");
}

namespace {

// Reverse-step mean from whatever the predictor emits. A mean prediction
// cannot be rewritten as epsilon or x0, so mu predictors only support
// mu-direct and vice versa.
Vec step_mean(const Vec& x_next, const Vec& pred, PredictionTarget pred_kind,
              GenMethod method, int n, const NoiseSchedule& s) {
  switch (method) {
    case GenMethod::epsilon: {
      if (pred_kind == PredictionTarget::mu) {
        throw std::invalid_argument("a mu predictor cannot drive the epsilon method");
      }
      const Vec eps = pred_kind == PredictionTarget::epsilon
                          ? pred
                          : eps_from_pair(x_next, pred, n + 1, s);
      return mean_from_eps(x_next, eps, n, s);
    }
    case GenMethod::x0_hat: {
      if (pred_kind == PredictionTarget::mu) {
        throw std::invalid_argument("a mu predictor cannot drive the x0-hat method");
      }
      const Vec x0_hat = pred_kind == PredictionTarget::x0
                             ? pred
                             : x0_from_eps(x_next, pred, n + 1, s);
      return mean_from_x0_hat(x_next, x0_hat, n, s);
    }
    case GenMethod::mu_direct: {
      if (pred_kind != PredictionTarget::mu) {
        throw std::invalid_argument("mu-direct needs a predictor trained on mu");
      }
      return pred;
    }
  }
  throw std::logic_error("unknown method");
}

}  // namespace

namespace {

Vec reverse_walk(const Predictor& predict, PredictionTarget pred_kind,
                 GenMethod method, int dim, const NoiseSchedule& s, RngStream& rng,
                 const std::vector<int>* snapshot_at,
                 std::vector<std::pair<int, Vec>>* snapshots) {
  const int N = s.n_steps();
  Vec x(static_cast<std::size_t>(dim));
  for (double& xi : x) xi = rng.next_normal();
  auto maybe_snapshot = [&](int n, const Vec& state) {
    if (snapshot_at == nullptr) return;
    if (std::find(snapshot_at->begin(), snapshot_at->end(), n) != snapshot_at->end()) {
      snapshots->emplace_back(n, state);
    }
  };
  maybe_snapshot(N, x);
  for (int n = N - 1; n >= 0; --n) {
    const Vec pred = predict(x, n + 1);
    if (pred.size() != x.size()) {
      throw std::runtime_error("predictor returned wrong dimension");
    }
    Vec mean = step_mean(x, pred, pred_kind, method, n, s);
    if (n > 0) {
      const double sd = std::sqrt(posterior_var(n, s));
      for (double& mi : mean) mi += sd * rng.next_normal();
    }
    // n == 0: posterior variance is exactly zero; no draw.
    x = std::move(mean);
    maybe_snapshot(n, x);
  }
  return x;
}

}  // namespace

Vec generate_one(const Predictor& predict, PredictionTarget pred_kind,
                 GenMethod method, int dim, const NoiseSchedule& s, RngStream& rng) {
  if (dim < 1) throw std::invalid_argument("generate_one: dim must be >= 1");
  return reverse_walk(predict, pred_kind, method, dim, s, rng, nullptr, nullptr);
}

std::vector<std::pair<int, Vec>> reverse_walk_snapshots(
    const Predictor& predict, PredictionTarget pred_kind, GenMethod method, int dim,
    const NoiseSchedule& s, RngStream& rng, const std::vector<int>& snapshot_at) {
  if (dim < 1) throw std::invalid_argument("reverse_walk_snapshots: dim must be >= 1");
  std::vector<std::pair<int, Vec>> snaps;
  reverse_walk(predict, pred_kind, method, dim, s, rng, &snapshot_at, &snaps);
  return snaps;
}

namespace {

SampleMatrix generate_impl(const NoiseModel& m, const GenerationConfig& cfg,
                           bool parallel) {
  if (cfg.count < 1) throw std::invalid_argument("generate: count must be >= 1");
  const int d = static_cast<int>(m.feature_names.size());
  SampleMatrix out = make_matrix(m.feature_names);
  out.rows = static_cast<std::size_t>(cfg.count);
  out.values.resize(out.rows * out.cols);
  Predictor pred = [&m](const Vec& x, int n_next) { return m.predict(x, n_next); };
  auto body = [&](std::int64_t i) {
    RngStream rng(cfg.seed, streams::sample(static_cast<std::uint64_t>(i)));
    const Vec x = reverse_walk(pred, m.config.target, cfg.method, d, m.schedule, rng,
                               nullptr, nullptr);
    for (int c = 0; c < d; ++c) {
      out.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) =
          x[static_cast<std::size_t>(c)];
    }
  };
  if (parallel) {
    parallel_for(cfg.count, body);
  } else {
    for (std::int64_t i = 0; i < cfg.count; ++i) body(i);
  }
  return invert_scaler(out, m.scaler);
}

}  // namespace

SampleMatrix generate_batch(const NoiseModel& m, const GenerationConfig& cfg) {
  return generate_impl(m, cfg, true);
}

SampleMatrix generate_batch_serial(const NoiseModel& m, const GenerationConfig& cfg) {
  return generate_impl(m, cfg, false);
}

std::vector<std::pair<int, SampleMatrix>> generate_snapshots(
    const NoiseModel& m, std::int64_t count, std::uint64_t seed,
    const std::vector<int>& snapshot_at) {
  if (count < 1) throw std::invalid_argument("generate_snapshots: count must be >= 1");
  for (int n : snapshot_at) {
    if (n < 0 || n > m.schedule.n_steps()) {
      throw std::invalid_argument("snapshot index outside [0, N]");
    }
  }
  const int d = static_cast<int>(m.feature_names.size());
  Predictor pred = [&m](const Vec& x, int n_next) { return m.predict(x, n_next); };

  std::vector<std::pair<int, SampleMatrix>> result;
  for (int n : snapshot_at) {
    SampleMatrix snap = make_matrix(m.feature_names);
    snap.rows = static_cast<std::size_t>(count);
    snap.values.resize(snap.rows * snap.cols);
    result.emplace_back(n, std::move(snap));
  }

  parallel_for(count, [&](std::int64_t i) {
    RngStream rng(seed, streams::sample(static_cast<std::uint64_t>(i)));
    std::vector<std::pair<int, Vec>> snaps;
    reverse_walk(pred, m.config.target, default_method(m.config.target), d,
                 m.schedule, rng, &snapshot_at, &snaps);
    for (auto& [n, state] : snaps) {
      for (std::size_t k = 0; k < result.size(); ++k) {
        if (result[k].first == n) {
          for (int c = 0; c < d; ++c) {
            result[k].second.at(static_cast<std::size_t>(i), static_cast<std::size_t>(c)) =
                state[static_cast<std::size_t>(c)];
          }
        }
      }
    }
  });
  return result;
}

}  // namespace oud
