#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "oud/data.hpp"

namespace oud {

// Gaussian kernel density estimate on a fixed grid. Bandwidth defaults to
// Silverman's rule 1.06 * sd * m^(-1/5).
struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

double silverman_bandwidth(std::span<const double> samples);
std::vector<double> make_grid(double lo, double hi, int count);
KdeCurve kde_1d(std::span<const double> samples, std::vector<double> grid,
                std::optional<double> bandwidth = {});
KdeCurve kde_1d_serial(std::span<const double> samples, std::vector<double> grid,
                       std::optional<double> bandwidth = {});

// Energy distance between two samples (V-statistic form):
//   2/(na*nb) sum ||a_i - b_j|| - 1/na^2 sum ||a_i - a_j||
//                               - 1/nb^2 sum ||b_i - b_j||
// Zero for identical samples by construction; positive when the samples
// separate. Row sums are computed in parallel slots and combined in row
// order, so the parallel and serial versions agree bitwise.
double energy_distance(const SampleMatrix& a, const SampleMatrix& b);
double energy_distance_serial(const SampleMatrix& a, const SampleMatrix& b);

// Null distribution of the statistic under "same source": the pooled
// reference is split into disjoint halves of sizes (na, nb) n_splits times
// by seeded shuffles. Returned values are unsorted, one per split.
std::vector<double> energy_null(const SampleMatrix& reference, std::size_t na,
                                std::size_t nb, int n_splits, std::uint64_t seed);

// Nearest-rank percentile, p in [0, 100].
double percentile(std::vector<double> values, double p);

// Binary confusion counts and derived scores. Scores whose denominator is
// zero are left empty rather than invented.
struct EvalReport {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
};

EvalReport classification_metrics(std::span<const int> predicted,
                                  std::span<const int> actual, int positive);

double f1_score(double precision, double recall);

}  // namespace oud
