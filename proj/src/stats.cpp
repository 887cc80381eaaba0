#include "oud/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "oud/parallel.hpp"
#include "oud/rng.hpp"

namespace oud {

double silverman_bandwidth(std::span<const double> samples) {
  if (samples.size() < 2) throw std::invalid_argument("bandwidth needs >= 2 samples");
  const MeanVar mv = mean_var_serial(samples);
  const double sd = std::sqrt(mv.var);
  if (!(sd > 0.0)) throw std::invalid_argument("bandwidth undefined for constant sample");
  return 1.06 * sd * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> make_grid(double lo, double hi, int count) {
  if (count < 2 || !(hi > lo)) throw std::invalid_argument("bad grid spec");
  std::vector<double> g(static_cast<std::size_t>(count));
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + i * step;
  return g;
}

namespace {

KdeCurve kde_impl(std::span<const double> samples, std::vector<double> grid,
                  std::optional<double> bandwidth, bool parallel) {
  if (samples.empty()) throw std::invalid_argument("kde needs samples");
  if (grid.empty()) throw std::invalid_argument("kde needs a grid");
  const double h = bandwidth.has_value() ? *bandwidth : silverman_bandwidth(samples);
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  KdeCurve out;
  out.bandwidth = h;
  out.grid = std::move(grid);
  out.density.resize(out.grid.size());
  const double norm =
      1.0 / (static_cast<double>(samples.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  auto body = [&](std::int64_t gi) {
    const double x = out.grid[static_cast<std::size_t>(gi)];
    double acc = 0.0;
    for (double s : samples) {
      const double u = (x - s) / h;
      acc += std::exp(-0.5 * u * u);
    }
    out.density[static_cast<std::size_t>(gi)] = acc * norm;
  };
  const std::int64_t n = static_cast<std::int64_t>(out.grid.size());
  if (parallel) {
    parallel_for(n, body);
  } else {
    for (std::int64_t i = 0; i < n; ++i) body(i);
  }
  return out;
}

double row_norm_dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Sum over j of ||x_r - y_j|| for each row r, computed into slots; the
// outer combine is in row order, so parallel == serial bitwise.
double cross_sum(const SampleMatrix& x, const SampleMatrix& y, bool parallel) {
  std::vector<double> rows(x.rows, 0.0);
  auto body = [&](std::int64_t r) {
    const auto xr = x.row(static_cast<std::size_t>(r));
    double acc = 0.0;
    for (std::size_t j = 0; j < y.rows; ++j) acc += row_norm_dist(xr, y.row(j));
    rows[static_cast<std::size_t>(r)] = acc;
  };
  const std::int64_t n = static_cast<std::int64_t>(x.rows);
  if (parallel) {
    parallel_for(n, body);
  } else {
    for (std::int64_t r = 0; r < n; ++r) body(r);
  }
  double total = 0.0;
  for (double v : rows) total += v;
  return total;
}

double energy_impl(const SampleMatrix& a, const SampleMatrix& b, bool parallel) {
  if (a.cols != b.cols) throw std::invalid_argument("energy distance: dimension mismatch");
  if (a.rows == 0 || b.rows == 0) throw std::invalid_argument("energy distance: empty sample");
  const double na = static_cast<double>(a.rows);
  const double nb = static_cast<double>(b.rows);
  const double cross = cross_sum(a, b, parallel);
  const double within_a = cross_sum(a, a, parallel);
  const double within_b = cross_sum(b, b, parallel);
  // single-division form: for identical samples the three terms share one
  // rounding and cancel to exactly zero
  return (2.0 * na * nb * cross - nb * nb * within_a - na * na * within_b) /
         (na * na * nb * nb);
}

}  // namespace

KdeCurve kde_1d(std::span<const double> samples, std::vector<double> grid,
                std::optional<double> bandwidth) {
  return kde_impl(samples, std::move(grid), bandwidth, true);
}

KdeCurve kde_1d_serial(std::span<const double> samples, std::vector<double> grid,
                       std::optional<double> bandwidth) {
  return kde_impl(samples, std::move(grid), bandwidth, false);
}

double energy_distance(const SampleMatrix& a, const SampleMatrix& b) {
  return energy_impl(a, b, true);
}

double energy_distance_serial(const SampleMatrix& a, const SampleMatrix& b) {
  return energy_impl(a, b, false);
}

std::vector<double> energy_null(const SampleMatrix& reference, std::size_t na,
                                std::size_t nb, int n_splits, std::uint64_t seed) {
  if (na + nb > reference.rows) {
    throw std::invalid_argument("energy_null: na + nb exceeds reference size");
  }
  if (na == 0 || nb == 0 || n_splits < 1) {
    throw std::invalid_argument("energy_null: need na, nb, n_splits >= 1");
  }
  std::vector<double> stats(static_cast<std::size_t>(n_splits));
  for (int k = 0; k < n_splits; ++k) {
    RngStream rng(seed, streams::resample(static_cast<std::uint64_t>(k)));
    std::vector<std::size_t> idx(reference.rows);
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = idx.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    SampleMatrix xa = make_matrix(reference.col_names);
    SampleMatrix xb = make_matrix(reference.col_names);
    for (std::size_t i = 0; i < na; ++i) xa.add_row(reference.row(idx[i]));
    for (std::size_t i = 0; i < nb; ++i) xb.add_row(reference.row(idx[na + i]));
    stats[static_cast<std::size_t>(k)] = energy_distance(xa, xb);
  }
  return stats;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (!(p >= 0.0 && p <= 100.0)) throw std::invalid_argument("percentile must be in [0, 100]");
  std::sort(values.begin(), values.end());
  if (p == 0.0) return values.front();
  const std::size_t rank = static_cast<std::size_t>(
      std::ceil(p / 100.0 * static_cast<double>(values.size())));
  return values[std::min(values.size(), std::max<std::size_t>(rank, 1)) - 1];
}

EvalReport classification_metrics(std::span<const int> predicted,
                                  std::span<const int> actual, int positive) {
  if (predicted.size() != actual.size()) {
    throw std::invalid_argument("prediction and truth lengths differ");
  }
  if (predicted.empty()) throw std::invalid_argument("no predictions to score");
  EvalReport r;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool pred_pos = predicted[i] == positive;
    const bool act_pos = actual[i] == positive;
    if (pred_pos && act_pos) ++r.tp;
    else if (pred_pos && !act_pos) ++r.fp;
    else if (!pred_pos && act_pos) ++r.fn;
    else ++r.tn;
  }
  if (r.tp + r.fp > 0) {
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  }
  if (r.tp + r.fn > 0) {
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  }
  if (r.precision && r.recall && (*r.precision + *r.recall > 0.0)) {
    r.f1 = f1_score(*r.precision, *r.recall);
  }
  return r;
}

double f1_score(double precision, double recall) {
  if (!(precision >= 0.0) || !(recall >= 0.0) || precision + recall == 0.0) {
    throw std::invalid_argument("f1 undefined for these precision/recall values");
  }
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace oud
