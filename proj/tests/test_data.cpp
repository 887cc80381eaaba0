#include <doctest.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "oud/data.hpp"
#include "oud/io.hpp"
#include "oud/rng.hpp"

using namespace oud;
using doctest::Approx;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("oud_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("csv round trip preserves values exactly") {
  TempDir tmp;
  SampleMatrix m = make_matrix({"V1", "V2"});
  m.add_row(std::vector<double>{0.1, -2.5e-17});
  m.add_row(std::vector<double>{1.0 / 3.0, 12345.678901234567});
  m.add_row(std::vector<double>{-0.0, 7e300});
  save_csv(m, tmp.file("x.csv"));
  const SampleMatrix r = load_csv(tmp.file("x.csv"));
  REQUIRE(r.rows == 3);
  REQUIRE(r.cols == 2);
  CHECK(r.col_names == m.col_names);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      CHECK(r.at(i, c) == m.at(i, c));  // bitwise through shortest decimal form
    }
  }
}

TEST_CASE("labeled csv separates the label column") {
  TempDir tmp;
  write_file(tmp.file("d.csv"), "a,Class,b\n1.5,0,2.5\n-1,1,3\n0.25,0,-4\n");
  const SampleMatrix m = load_csv(tmp.file("d.csv"), "Class");
  REQUIRE(m.rows == 3);
  CHECK(m.cols == 2);
  CHECK(m.col_names == std::vector<std::string>{"a", "b"});
  CHECK(m.labels == std::vector<int>{0, 1, 0});
  CHECK(m.label_name == "Class");
  CHECK(m.at(1, 0) == -1.0);
  CHECK(m.at(1, 1) == 3.0);

  const SampleMatrix zeros = m.select_label(0);
  CHECK(zeros.rows == 2);
  CHECK_FALSE(zeros.has_labels());

  // label round trip through save
  save_csv(m, tmp.file("d2.csv"));
  const SampleMatrix m2 = load_csv(tmp.file("d2.csv"), "Class");
  CHECK(m2.labels == m.labels);
  CHECK(m2.values == m.values);
}

TEST_CASE("csv errors carry file and line position") {
  TempDir tmp;
  write_file(tmp.file("bad1.csv"), "a,b\n1,2\n3\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad1.csv")),
                       doctest::Contains("bad1.csv:3"), std::runtime_error);

  write_file(tmp.file("bad2.csv"), "a,b\n1,x\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad2.csv")),
                       doctest::Contains(":2"), std::runtime_error);

  write_file(tmp.file("bad3.csv"), "a,b\n");
  CHECK_THROWS_AS(load_csv(tmp.file("bad3.csv")), std::runtime_error);

  write_file(tmp.file("bad4.csv"), "a,b\n1,2\n\n3,4\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad4.csv")),
                       doctest::Contains("blank"), std::runtime_error);

  write_file(tmp.file("bad5.csv"), "a,b\n1.5,2.25\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad5.csv"), "c"),
                       doctest::Contains("'c' not found"), std::runtime_error);

  write_file(tmp.file("bad6.csv"), "a,b\n1.5,2.25\n");
  CHECK_THROWS_WITH_AS(load_csv(tmp.file("bad6.csv"), "b"),
                       doctest::Contains("not an integer"), std::runtime_error);

  CHECK_THROWS_AS(load_csv(tmp.file("missing.csv")), std::runtime_error);
}

TEST_CASE("crlf and padded fields are tolerated") {
  TempDir tmp;
  write_file(tmp.file("win.csv"), "a, b\r\n1.5, 2.5\r\n-1, 3\r\n");
  const SampleMatrix m = load_csv(tmp.file("win.csv"));
  CHECK(m.col_names == std::vector<std::string>{"a", "b"});
  CHECK(m.at(0, 1) == 2.5);
  CHECK(m.rows == 2);
}

TEST_CASE("scaler standardizes and inverts") {
  SampleMatrix m = make_matrix({"x", "y"});
  RngStream rng = RngStream(8, 0);
  for (int i = 0; i < 500; ++i) {
    m.add_row(std::vector<double>{3.0 + 2.0 * rng.next_normal(),
                                  -5.0 + 0.5 * rng.next_normal()});
  }
  const Scaler s = fit_scaler(m);
  CHECK(s.mean[0] == Approx(3.0).epsilon(0.2));
  CHECK(s.stddev[0] == Approx(2.0).epsilon(0.15));
  const SampleMatrix z = apply_scaler(m, s);
  const Scaler zs = fit_scaler(z);
  CHECK(zs.mean[0] == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(zs.mean[1] == Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(zs.stddev[0] == Approx(1.0).epsilon(1e-12));
  CHECK(zs.stddev[1] == Approx(1.0).epsilon(1e-12));
  const SampleMatrix back = invert_scaler(z, s);
  for (std::size_t r = 0; r < m.rows; ++r) {
    CHECK(back.at(r, 0) == Approx(m.at(r, 0)).epsilon(1e-12));
    CHECK(back.at(r, 1) == Approx(m.at(r, 1)).epsilon(1e-12));
  }
}

TEST_CASE("constant columns cannot be standardized") {
  SampleMatrix m = make_matrix({"x", "flat"});
  m.add_row(std::vector<double>{1.0, 7.0});
  m.add_row(std::vector<double>{2.0, 7.0});
  CHECK_THROWS_WITH_AS(fit_scaler(m), doctest::Contains("flat"), std::invalid_argument);
}

TEST_CASE("split is seeded, disjoint, and stratified") {
  SampleMatrix m = make_matrix({"x"});
  m.label_name = "Class";
  for (int i = 0; i < 100; ++i) {
    m.values.push_back(static_cast<double>(i));
    m.labels.push_back(i < 80 ? 0 : 1);
    ++m.rows;
  }
  const SplitResult a = train_test_split(m, 0.25, 42);
  const SplitResult b = train_test_split(m, 0.25, 42);
  const SplitResult c = train_test_split(m, 0.25, 43);
  CHECK(a.train.values == b.train.values);
  CHECK(a.test.values == b.test.values);
  CHECK(a.train.values != c.train.values);

  CHECK(a.train.rows == 75);
  CHECK(a.test.rows == 25);
  // stratified: 20 test rows from the 80-class, 5 from the 20-class
  int test_ones = 0;
  for (int l : a.test.labels) test_ones += (l == 1);
  CHECK(test_ones == 5);

  // disjoint and complete
  std::vector<double> all;
  for (std::size_t r = 0; r < a.train.rows; ++r) all.push_back(a.train.at(r, 0));
  for (std::size_t r = 0; r < a.test.rows; ++r) all.push_back(a.test.at(r, 0));
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 100; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);

  CHECK_THROWS_AS(train_test_split(m, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(train_test_split(m, 1.0, 1), std::invalid_argument);
}

TEST_CASE("augment concatenates with provenance and label") {
  SampleMatrix train = make_matrix({"x", "y"});
  train.label_name = "Class";
  train.values = {1, 2, 3, 4};
  train.labels = {0, 1};
  train.rows = 2;

  SampleMatrix synth = make_matrix({"x", "y"});
  synth.values = {9, 8, 7, 6};
  synth.rows = 2;

  const SampleMatrix aug = augment(train, synth, 1);
  REQUIRE(aug.rows == 4);
  CHECK(aug.labels == std::vector<int>{0, 1, 1, 1});
  CHECK(aug.provenance == std::vector<int>{0, 0, 1, 1});
  CHECK(aug.provenance_name == "synthetic");
  CHECK(aug.at(2, 0) == 9.0);

  // schema mismatch rejected
  SampleMatrix other = make_matrix({"x", "z"});
  other.values = {1, 2};
  other.rows = 1;
  CHECK_THROWS_AS(augment(train, other, 1), std::invalid_argument);

  // provenance column appears in the saved file
  TempDir tmp;
  save_csv(aug, tmp.file("aug.csv"));
  const std::string text = read_text_file(tmp.file("aug.csv"));
  CHECK(text.substr(0, text.find('\n')) == "x,y,Class,synthetic");
}
