#include "oud/data.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "oud/io.hpp"
#include "oud/parallel.hpp"
#include "oud/rng.hpp"

namespace oud {

namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string strip(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return s.substr(a, b - a);
}

int parse_label(const std::string& field, const std::string& path, std::size_t line) {
  const double v = [&] {
    try {
      return parse_double(field, "label");
    } catch (const std::exception& e) {
      fail_at(path, line, e.what());
    }
  }();
  if (!(std::floor(v) == v) || std::abs(v) > 2147483647.0) {
    fail_at(path, line, "label '" + field + "' is not an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<double> SampleMatrix::row_vec(std::size_t r) const {
  const auto sp = row(r);
  return std::vector<double>(sp.begin(), sp.end());
}

void SampleMatrix::add_row(std::span<const double> x, std::optional<int> label) {
  if (x.size() != cols) throw std::invalid_argument("add_row: wrong arity");
  values.insert(values.end(), x.begin(), x.end());
  if (label.has_value()) {
    if (labels.size() != rows) throw std::invalid_argument("add_row: label on unlabeled matrix");
    labels.push_back(*label);
  } else if (!labels.empty()) {
    throw std::invalid_argument("add_row: missing label on labeled matrix");
  }
  ++rows;
}

SampleMatrix SampleMatrix::select_label(int label) const {
  if (!has_labels()) throw std::invalid_argument("select_label: matrix has no labels");
  SampleMatrix out;
  out.cols = cols;
  out.col_names = col_names;
  for (std::size_t r = 0; r < rows; ++r) {
    if (labels[r] == label) {
      const auto sp = row(r);
      out.values.insert(out.values.end(), sp.begin(), sp.end());
      ++out.rows;
    }
  }
  return out;
}

std::vector<double> SampleMatrix::column(std::size_t c) const {
  if (c >= cols) throw std::out_of_range("column index out of range");
  std::vector<double> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = at(r, c);
  return out;
}

SampleMatrix make_matrix(std::vector<std::string> col_names) {
  SampleMatrix m;
  m.cols = col_names.size();
  m.col_names = std::move(col_names);
  return m;
}

SampleMatrix load_csv(const std::string& path, const std::string& label_column) {
  const std::string text = read_text_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) fail_at(path, 1, "empty file");
  ++line_no;
  std::vector<std::string> header = split_fields(line);
  for (auto& h : header) h = strip(h);
  if (header.empty() || header[0].empty()) fail_at(path, 1, "missing header");

  std::ptrdiff_t label_idx = -1;
  if (!label_column.empty()) {
    const auto it = std::find(header.begin(), header.end(), label_column);
    if (it == header.end()) {
      fail_at(path, 1, "label column '" + label_column + "' not found in header");
    }
    label_idx = it - header.begin();
  }

  SampleMatrix m;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (static_cast<std::ptrdiff_t>(i) == label_idx) continue;
    if (header[i].empty()) fail_at(path, 1, "empty column name in header");
    m.col_names.push_back(header[i]);
  }
  m.cols = m.col_names.size();
  if (m.cols == 0) fail_at(path, 1, "no feature columns");
  if (label_idx >= 0) m.label_name = label_column;

  std::vector<double> xrow(m.cols);
  while (std::getline(in, line)) {
    ++line_no;
    if (strip(line).empty()) {
      // allow a single trailing blank line
      std::string rest;
      if (std::getline(in, rest)) fail_at(path, line_no, "blank line inside data");
      break;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      fail_at(path, line_no, "expected " + std::to_string(header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
    }
    std::size_t c = 0;
    std::optional<int> label;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string f = strip(fields[i]);
      if (static_cast<std::ptrdiff_t>(i) == label_idx) {
        label = parse_label(f, path, line_no);
        continue;
      }
      try {
        xrow[c] = parse_double(f, "field '" + header[i] + "'");
      } catch (const std::exception& e) {
        fail_at(path, line_no, e.what());
      }
      ++c;
    }
    if (label_idx >= 0 && m.labels.size() != m.rows) {
      fail_at(path, line_no, "missing label");
    }
    m.values.insert(m.values.end(), xrow.begin(), xrow.end());
    if (label.has_value()) m.labels.push_back(*label);
    ++m.rows;
  }
  if (m.rows == 0) fail_at(path, line_no, "no data rows");
  return m;
}

void save_csv(const SampleMatrix& m, const std::string& path) {
  std::string out;
  for (std::size_t c = 0; c < m.col_names.size(); ++c) {
    if (c > 0) out += ',';
    out += m.col_names[c];
  }
  if (!m.label_name.empty()) {
    out += ',';
    out += m.label_name;
  }
  if (!m.provenance_name.empty()) {
    out += ',';
    out += m.provenance_name;
  }
  out += '\n';
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      if (c > 0) out += ',';
      out += format_double(m.at(r, c));
    }
    if (!m.label_name.empty()) {
      out += ',';
      out += std::to_string(m.labels[r]);
    }
    if (!m.provenance_name.empty()) {
      out += ',';
      out += std::to_string(m.provenance[r]);
    }
    out += '\n';
  }
  atomic_write_text(path, out);
}

Scaler fit_scaler(const SampleMatrix& m) {
  if (m.rows < 2) throw std::invalid_argument("need >= 2 rows to fit a scaler");
  Scaler s;
  s.mean.resize(m.cols);
  s.stddev.resize(m.cols);
  for (std::size_t c = 0; c < m.cols; ++c) {
    const std::vector<double> col = m.column(c);
    const MeanVar mv = mean_var_serial(col);
    if (!(mv.var > 0.0)) {
      throw std::invalid_argument("column '" + m.col_names[c] +
                                  "' is constant; cannot standardize");
    }
    s.mean[c] = mv.mean;
    s.stddev[c] = std::sqrt(mv.var);
  }
  return s;
}

Scaler identity_scaler(std::size_t dim) {
  Scaler s;
  s.mean.assign(dim, 0.0);
  s.stddev.assign(dim, 1.0);
  return s;
}

namespace {

SampleMatrix scale_with(const SampleMatrix& m, const Scaler& s, bool invert) {
  if (s.mean.size() != m.cols || s.stddev.size() != m.cols) {
    throw std::invalid_argument("scaler dimension does not match matrix");
  }
  SampleMatrix out = m;
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      out.at(r, c) = invert ? m.at(r, c) * s.stddev[c] + s.mean[c]
                            : (m.at(r, c) - s.mean[c]) / s.stddev[c];
    }
  }
  return out;
}

}  // namespace

SampleMatrix apply_scaler(const SampleMatrix& m, const Scaler& s) {
  return scale_with(m, s, false);
}

SampleMatrix invert_scaler(const SampleMatrix& m, const Scaler& s) {
  return scale_with(m, s, true);
}

namespace {

// Seeded Fisher-Yates via one RNG stream.
void shuffle_indices(std::vector<std::size_t>& idx, RngStream& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace

SplitResult train_test_split(const SampleMatrix& m, double test_fraction,
                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must be in (0, 1)");
  }
  SplitResult r;
  r.train.cols = r.test.cols = m.cols;
  r.train.col_names = r.test.col_names = m.col_names;
  r.train.label_name = r.test.label_name = m.label_name;

  // Group rows, stratifying by label when present.
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < m.rows; ++i) {
    groups[m.has_labels() ? m.labels[i] : 0].push_back(i);
  }
  std::uint64_t g_index = 0;
  for (auto& [label, idx] : groups) {
    (void)label;
    RngStream rng(seed, streams::split(g_index++));
    shuffle_indices(idx, rng);
    const std::size_t n_test = static_cast<std::size_t>(
        std::lround(test_fraction * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      SampleMatrix& dst = k < n_test ? r.test : r.train;
      dst.add_row(m.row(idx[k]),
                  m.has_labels() ? std::optional<int>(m.labels[idx[k]]) : std::nullopt);
    }
  }
  if (r.train.rows == 0 || r.test.rows == 0) {
    throw std::invalid_argument("split produced an empty side; adjust test_fraction");
  }
  return r;
}

SampleMatrix augment(const SampleMatrix& train, const SampleMatrix& synthetic,
                     int synthetic_label) {
  if (train.cols != synthetic.cols || train.col_names != synthetic.col_names) {
    throw std::invalid_argument("augment: feature schemas do not match");
  }
  if (!train.has_labels()) {
    throw std::invalid_argument("augment: training data must be labeled");
  }
  SampleMatrix out;
  out.cols = train.cols;
  out.col_names = train.col_names;
  out.label_name = train.label_name;
  out.provenance_name = "synthetic";
  out.values = train.values;
  out.labels = train.labels;
  out.rows = train.rows;
  out.provenance.assign(train.rows, 0);
  out.values.insert(out.values.end(), synthetic.values.begin(), synthetic.values.end());
  out.labels.insert(out.labels.end(), synthetic.rows, synthetic_label);
  out.provenance.insert(out.provenance.end(), synthetic.rows, 1);
  out.rows += synthetic.rows;
  return out;
}

}  // namespace oud
