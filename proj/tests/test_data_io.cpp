#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "lsec/data_io.hpp"

using namespace lsec;

namespace {

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_SUITE("data-io") {

TEST_CASE("csv parse infers shape") {
  auto path = tmp_path("lsec_t1.csv");
  write_file(path, "0,1\n2,3\n4,5");
  DataMatrix m = load_matrix(path, MatrixFormat::csv);
  CHECK(m.n == 3);
  CHECK(m.d == 2);
  CHECK(m.at(2, 1) == 5.0);
}

TEST_CASE("bin round trip is bit-exact") {
  auto path = tmp_path("lsec_t2.bin");
  DataMatrix m;
  m.n = 2;
  m.d = 2;
  m.values = {1.5, -2.25, 3.0, 0.125};  // exactly representable as float
  save_matrix(m, path, MatrixFormat::bin);
  DataMatrix back = load_matrix(path, MatrixFormat::bin);
  REQUIRE(back.n == 2);
  REQUIRE(back.d == 2);
  CHECK(back.values == m.values);

  // save/load is idempotent for arbitrary doubles after the first pass
  DataMatrix odd;
  odd.n = 1;
  odd.d = 3;
  odd.values = {1.0 / 3.0, 3.14159265358979, 1e-7};
  save_matrix(odd, path, MatrixFormat::bin);
  DataMatrix once = load_matrix(path, MatrixFormat::bin);
  save_matrix(once, path, MatrixFormat::bin);
  DataMatrix twice = load_matrix(path, MatrixFormat::bin);
  CHECK(once.values == twice.values);
}

TEST_CASE("csv round trip preserves doubles") {
  auto path = tmp_path("lsec_t3.csv");
  DataMatrix m;
  m.n = 2;
  m.d = 3;
  m.values = {1.0 / 3.0, -1.2345678901234567e-5, 9.87e12, 0.0, -0.5, 42.0};
  save_matrix(m, path, MatrixFormat::csv);
  DataMatrix back = load_matrix(path, MatrixFormat::csv);
  REQUIRE(back.values.size() == m.values.size());
  for (std::size_t i = 0; i < m.values.size(); ++i)
    CHECK(std::abs(back.values[i] - m.values[i]) <=
          1e-12 * std::max(1.0, std::abs(m.values[i])));
}

TEST_CASE("csv rejects NaN, ragged rows, junk") {
  auto path = tmp_path("lsec_t4.csv");
  write_file(path, "0,NaN\n1,2\n");
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::csv), FormatError);
  write_file(path, "0,1\n2\n");
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::csv), FormatError);
  write_file(path, "0,abc\n");
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::csv), FormatError);
  write_file(path, "");
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::csv), FormatError);
  CHECK_THROWS_AS(load_matrix(tmp_path("lsec_missing_file.csv"), MatrixFormat::csv),
                  IOError);
}

TEST_CASE("bin parses a hand-written file") {
  auto path = tmp_path("lsec_t5b.bin");
  {
    std::ofstream out(path, std::ios::binary);
    std::uint64_t header[2] = {2, 2};
    out.write(reinterpret_cast<char*>(header), sizeof(header));
    float vals[4] = {1.0f, 2.5f, -3.0f, 0.5f};
    out.write(reinterpret_cast<char*>(vals), sizeof(vals));
  }
  DataMatrix m = load_matrix(path, MatrixFormat::bin);
  CHECK(m.n == 2);
  CHECK(m.d == 2);
  CHECK(m.values == std::vector<double>{1.0, 2.5, -3.0, 0.5});
}

TEST_CASE("bin rejects truncation and bad headers") {
  auto path = tmp_path("lsec_t5.bin");
  {
    std::ofstream out(path, std::ios::binary);
    std::uint64_t header[2] = {4, 2};
    out.write(reinterpret_cast<char*>(header), sizeof(header));
    float one = 1.0f;
    out.write(reinterpret_cast<char*>(&one), sizeof(one));  // far too short
  }
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::bin), FormatError);
  {
    std::ofstream out(path, std::ios::binary);
    std::uint64_t header[2] = {0, 2};
    out.write(reinterpret_cast<char*>(header), sizeof(header));
  }
  CHECK_THROWS_AS(load_matrix(path, MatrixFormat::bin), FormatError);
}

TEST_CASE("label round trip and rejects") {
  auto path = tmp_path("lsec_t6.labels");
  LabelVector l;
  l.labels = {0, 1, 2};
  l.c = 3;
  save_labels(l, path);
  {
    std::ifstream in(path);
    std::string all((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    CHECK(all == "0\n1\n2\n");
  }
  LabelVector back = load_labels(path);
  CHECK(back.labels == l.labels);
  CHECK(back.c == 3);

  write_file(path, "");
  CHECK_THROWS_AS(load_labels(path), FormatError);
  write_file(path, "-1\n");
  CHECK_THROWS_AS(load_labels(path), FormatError);
  write_file(path, "1.5\n");
  CHECK_THROWS_AS(load_labels(path), FormatError);
}

TEST_CASE("generators match the advertised class counts") {
  CHECK(shape_class_count(Shape::tb) == 3);
  CHECK(shape_class_count(Shape::sf) == 4);
  CHECK(shape_class_count(Shape::cc) == 3);
  CHECK(shape_class_count(Shape::cg) == 11);
  CHECK(shape_class_count(Shape::fl) == 13);

  for (Shape s : {Shape::tb, Shape::sf, Shape::cc, Shape::cg, Shape::fl}) {
    auto gen = gen_synthetic(s, 400, 0.05, 7);
    CHECK(gen.data.n == 400);
    CHECK(gen.data.d == 2);
    CHECK(gen.truth.c == shape_class_count(s));
    std::vector<int> count(static_cast<std::size_t>(gen.truth.c), 0);
    for (auto v : gen.truth.labels) ++count[static_cast<std::size_t>(v)];
    for (int cnt : count) CHECK(cnt > 0);
  }
}

TEST_CASE("cc example: n=3000 noise=0.05 seed=1") {
  auto gen = gen_synthetic(Shape::cc, 3000, 0.05, 1);
  CHECK(gen.data.n == 3000);
  CHECK(gen.data.d == 2);
  CHECK(gen.truth.c == 3);
}

TEST_CASE("generation is deterministic per seed") {
  auto a = gen_synthetic(Shape::cc, 500, 0.05, 1);
  auto b = gen_synthetic(Shape::cc, 500, 0.05, 1);
  CHECK(a.data.values == b.data.values);
  CHECK(a.truth.labels == b.truth.labels);
  auto c = gen_synthetic(Shape::cc, 500, 0.05, 2);
  CHECK(a.data.values != c.data.values);
}

TEST_CASE("noiseless cc points sit exactly on the three radii") {
  auto gen = gen_synthetic(Shape::cc, 600, 0.0, 3);
  const std::set<double> radii = {0.4, 1.6, 2.8};
  for (std::size_t i = 0; i < gen.data.n; ++i) {
    double r = std::hypot(gen.data.at(i, 0), gen.data.at(i, 1));
    double best = 1e9;
    for (double target : radii) best = std::min(best, std::abs(r - target));
    CHECK(best <= 1e-12);
  }
}

TEST_CASE("gen rejects undersized n and bad noise") {
  CHECK_THROWS_AS(gen_synthetic(Shape::cc, 29, 0.05, 1), ParamError);
  CHECK_THROWS_AS(gen_synthetic(Shape::fl, 129, 0.05, 1), ParamError);
  CHECK_THROWS_AS(gen_synthetic(Shape::cc, 100, -0.1, 1), ParamError);
}

TEST_CASE("shape parsing") {
  CHECK(parse_shape("cc") == Shape::cc);
  CHECK(!parse_shape("zz").has_value());
  CHECK(parse_format("bin") == MatrixFormat::bin);
  CHECK(!parse_format("xml").has_value());
}

}  // TEST_SUITE
