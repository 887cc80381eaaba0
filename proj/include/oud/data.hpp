#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace oud {

// Row-major table of doubles with named feature columns, an optional
// integer label column and an optional provenance column (0 = original,
// 1 = synthetic) appended by augment().
struct SampleMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;  // feature columns only
  std::vector<double> values;
  std::vector<std::string> col_names;
  std::vector<int> labels;  // empty or size rows
  std::string label_name;
  std::vector<int> provenance;  // empty or size rows
  std::string provenance_name;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values).subspan(r * cols, cols);
  }
  std::vector<double> row_vec(std::size_t r) const;
  void add_row(std::span<const double> x, std::optional<int> label = {});
  bool has_labels() const { return !labels.empty(); }

  // Rows whose label equals `label`, feature columns only.
  SampleMatrix select_label(int label) const;
  std::vector<double> column(std::size_t c) const;
};

SampleMatrix make_matrix(std::vector<std::string> col_names);

// Strict CSV: header row, comma-separated numeric fields, same arity per
// row. Errors carry file name and 1-based line number. When label_column
// is given that column must hold integers and is moved out of the feature
// block.
SampleMatrix load_csv(const std::string& path, const std::string& label_column = "");
void save_csv(const SampleMatrix& m, const std::string& path);

// Per-feature standardization. Fitting rejects constant columns.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;
};

Scaler fit_scaler(const SampleMatrix& m);
Scaler identity_scaler(std::size_t dim);
SampleMatrix apply_scaler(const SampleMatrix& m, const Scaler& s);
SampleMatrix invert_scaler(const SampleMatrix& m, const Scaler& s);

struct SplitResult {
  SampleMatrix train;
  SampleMatrix test;
};

// Seeded shuffle split; stratified by label when the matrix has labels so
// class proportions carry over to both halves.
SplitResult train_test_split(const SampleMatrix& m, double test_fraction,
                             std::uint64_t seed);

// Original rows plus synthetic rows labeled `synthetic_label`, tagged with
// a provenance column. Feature schemas must match.
SampleMatrix augment(const SampleMatrix& train, const SampleMatrix& synthetic,
                     int synthetic_label);

}  // namespace oud
