#include <doctest.h>

#include <cmath>
#include <set>

#include "lsec/data_io.hpp"
#include "lsec/instrument.hpp"
#include "lsec/kmeans.hpp"
#include "lsec/knn_affinity.hpp"
#include "lsec/landmarks.hpp"
#include "lsec/rng.hpp"
#include "oracles.hpp"

using namespace lsec;

namespace {

LandmarkSet landmark_set_of(const DataMatrix& X, std::vector<double> pts,
                            std::size_t d) {
  LandmarkSet L;
  L.points.d = d;
  L.points.k = pts.size() / d;
  L.points.values = std::move(pts);
  auto [labels, inertia] = assign_nearest(X, L.points);
  L.assignment = std::move(labels.labels);
  L.rss = inertia;
  return L;
}

NeighborLists manual_lists(std::vector<std::int32_t> idx, std::vector<double> d2,
                           std::size_t n, int k, std::size_t p) {
  NeighborLists l;
  l.n = n;
  l.p = p;
  l.k = k;
  l.k_prime = k;
  l.idx = std::move(idx);
  l.dist2 = std::move(d2);
  return l;
}

}  // namespace

TEST_SUITE("knn-affinity") {

TEST_CASE("k_prime = p reproduces exact KNN on 100 random instances") {
  Rng rng(21);
  for (int rep = 0; rep < 100; ++rep) {
    std::size_t n = 8 + rng.index(40);
    std::size_t p = 2 + rng.index(11);
    int k = 1 + static_cast<int>(rng.index(p));
    auto X = oracle::random_points(n, 1 + rng.index(3), rng);
    auto P = oracle::random_points(p, X.d, rng);
    auto L = landmark_set_of(X, P.values, X.d);

    auto approx = approx_knn(X, L, k, static_cast<int>(p));
    std::vector<std::int32_t> idx;
    std::vector<double> d2;
    oracle::brute_knn(X, L.points, k, idx, d2);
    CHECK(approx.idx == idx);
    CHECK(approx.dist2 == d2);
  }
}

TEST_CASE("a point sitting on a landmark sees it first at distance zero") {
  DataMatrix X;
  X.n = 3;
  X.d = 2;
  X.values = {0, 0, 5, 5, 2, 2};
  auto L = landmark_set_of(X, {5, 5, 0, 0, 9, 9}, 2);
  auto nb = approx_knn(X, L, 2, 3);
  CHECK(nb.row_idx(0)[0] == 1);  // landmark (0,0)
  CHECK(nb.row_dist2(0)[0] == 0.0);
  CHECK(nb.row_idx(1)[0] == 0);
  CHECK(nb.row_dist2(1)[0] == 0.0);
}

TEST_CASE("default candidate width reaches 0.95 recall on cc") {
  auto gen = gen_synthetic(Shape::cc, 5000, 0.05, 31);
  auto L = select_landmarks(gen.data, 200, 50, 5);
  const int k = 5;
  auto approx = approx_knn(gen.data, L, k, 50);

  std::vector<std::int32_t> idx;
  std::vector<double> d2;
  oracle::brute_knn(gen.data, L.points, k, idx, d2);
  double hits = 0.0;
  for (std::size_t i = 0; i < gen.data.n; ++i) {
    std::set<std::int32_t> exact(idx.begin() + i * k, idx.begin() + (i + 1) * k);
    for (int t = 0; t < k; ++t) hits += exact.count(approx.row_idx(i)[t]);
  }
  double recall = hits / static_cast<double>(gen.data.n * k);
  INFO("recall=", recall);
  CHECK(recall >= 0.95);
}

TEST_CASE("nested prefixes: identity, head, and subset property") {
  Rng rng(33);
  auto X = oracle::random_points(60, 2, rng);
  auto P = oracle::random_points(10, 2, rng);
  auto L = landmark_set_of(X, P.values, 2);
  auto full = approx_knn(X, L, 6, 10);

  auto same = nested_neighbors(full, 6);
  CHECK(same.idx == full.idx);
  CHECK(same.dist2 == full.dist2);

  auto head = nested_neighbors(full, 1);
  for (std::size_t i = 0; i < X.n; ++i) {
    CHECK(head.row_idx(i)[0] == full.row_idx(i)[0]);
    CHECK(head.row_dist2(i)[0] == full.row_dist2(i)[0]);
  }

  auto k2 = nested_neighbors(full, 2);
  auto k4 = nested_neighbors(full, 4);
  for (std::size_t i = 0; i < X.n; ++i) {
    std::set<std::int32_t> small(k2.row_idx(i), k2.row_idx(i) + 2);
    std::set<std::int32_t> large(k4.row_idx(i), k4.row_idx(i) + 4);
    for (auto v : small) CHECK(large.count(v) == 1);
  }

  CHECK_THROWS_AS(nested_neighbors(full, 7), ParamError);
  CHECK_THROWS_AS(nested_neighbors(full, 0), ParamError);
}

TEST_CASE("estimate_sigma arithmetic") {
  // all farthest distances 2 -> sigma 2
  auto a = manual_lists({0, 0}, {4.0, 4.0}, 2, 1, 1);
  CHECK(estimate_sigma(a) == doctest::Approx(2.0));
  // mixed farthest distances {1,3} -> sigma 2
  auto b = manual_lists({0, 0}, {1.0, 9.0}, 2, 1, 1);
  CHECK(estimate_sigma(b) == doctest::Approx(2.0));
  // everything at distance zero -> fallback 1
  auto c = manual_lists({0, 0}, {0.0, 0.0}, 2, 1, 1);
  CHECK(estimate_sigma(c) == doctest::Approx(1.0));
}

TEST_CASE("affinity weights follow the Gaussian kernel") {
  double sigma = 0.7;
  auto lists = manual_lists({0, 1}, {0.0, 2.0 * sigma * sigma}, 1, 2, 2);
  auto B = build_affinity(lists, sigma);
  CHECK(B.row_weight(0)[0] == doctest::Approx(1.0));               // dist 0
  CHECK(B.row_weight(0)[1] == doctest::Approx(std::exp(-1.0)));    // dist sigma*sqrt(2)

  auto wide = build_affinity(lists, 1e9);
  CHECK(std::abs(wide.row_weight(0)[1] - 1.0) <= 1e-9);  // sigma -> inf limit

  // underflow clamps to 1e-300 instead of producing a zero row
  auto far = manual_lists({0}, {1e6}, 1, 1, 1);
  auto clamped = build_affinity(far, 1e-3);
  CHECK(clamped.row_weight(0)[0] == 1e-300);

  CHECK_THROWS_AS(build_affinity(lists, 0.0), ParamError);
  CHECK_THROWS_AS(build_affinity(lists, -1.0), ParamError);
}

TEST_CASE("affinity rows have exactly K entries in (0,1]") {
  auto gen = gen_synthetic(Shape::tb, 1000, 0.05, 5);
  auto sets = gen_landmark_sets(gen.data, 2, 50, 10, 3);
  auto batch = build_affinity_batch(gen.data, sets, {2, 3, 4, 5}, 4);
  REQUIRE(batch.size() == 8);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    int expected_k = static_cast<int>(2 + b % 4);
    CHECK(batch[b].k == expected_k);
    for (std::size_t i = 0; i < batch[b].n; ++i) {
      std::set<std::int32_t> seen;
      for (int t = 0; t < batch[b].k; ++t) {
        double w = batch[b].row_weight(i)[t];
        CHECK(w > 0.0);
        CHECK(w <= 1.0);
        seen.insert(batch[b].row_idx(i)[t]);
      }
      CHECK(seen.size() == static_cast<std::size_t>(batch[b].k));
    }
  }
}

TEST_CASE("batch reuse is bit-identical to independent construction") {
  auto gen = gen_synthetic(Shape::cc, 3000, 0.05, 7);
  auto sets = gen_landmark_sets(gen.data, 2, 100, 25, 41);
  const std::vector<int> pool = {2, 3, 4, 5};

  instrument::reset();
  auto batch = build_affinity_batch(gen.data, sets, pool, 2);
  CHECK(instrument::knn_searches.load() == 2);  // one search per landmark set
  REQUIRE(batch.size() == 4);

  // independent path: fresh KNN at the group maximum for every matrix
  for (std::size_t b = 0; b < batch.size(); ++b) {
    std::size_t set_idx = b / 2;
    const int* grp = pool.data() + (set_idx % 2) * 2;
    int kq = grp[1];
    auto full = approx_knn(gen.data, sets[set_idx], kq,
                           default_k_prime(kq, sets[set_idx].points.k));
    auto B = build_affinity(nested_neighbors(full, grp[b % 2]), estimate_sigma(full));
    CHECK(B.idx == batch[b].idx);
    CHECK(B.weight == batch[b].weight);
    CHECK(B.sigma == batch[b].sigma);
  }
}

TEST_CASE("q=1 yields one affinity per landmark set") {
  auto gen = gen_synthetic(Shape::tb, 600, 0.05, 9);
  auto sets = gen_landmark_sets(gen.data, 3, 30, 10, 8);
  auto batch = build_affinity_batch(gen.data, sets, {4}, 1);
  REQUIRE(batch.size() == 3);
  for (const auto& B : batch) CHECK(B.k == 4);
}

TEST_CASE("parameter validation") {
  Rng rng(51);
  auto X = oracle::random_points(40, 2, rng);
  auto P = oracle::random_points(8, 2, rng);
  auto L = landmark_set_of(X, P.values, 2);
  CHECK_THROWS_AS(approx_knn(X, L, 0, 4), ParamError);
  CHECK_THROWS_AS(approx_knn(X, L, 4, 4), ParamError);   // k_prime must exceed k
  CHECK_THROWS_AS(approx_knn(X, L, 4, 9), ParamError);   // k_prime > p
  CHECK_THROWS_AS(approx_knn(X, L, 9, 9), ParamError);   // k > p
  CHECK_NOTHROW(approx_knn(X, L, 8, 8));                 // k == k_prime == p is exact
  CHECK_THROWS_AS(build_affinity_batch(X, {L}, {3, 2}, 2), ParamError);
  CHECK_THROWS_AS(build_affinity_batch(X, {L}, {2, 3, 4}, 2), ParamError);
  CHECK_THROWS_AS(build_affinity_batch(X, {L}, {2, 9}, 2), ParamError);
}

}  // TEST_SUITE
