#include "lsec/knn_affinity.hpp"

#include <algorithm>
#include <cmath>

#include "lsec/instrument.hpp"

namespace lsec {

namespace {

inline double dist2(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

struct Cand {
  double d2;
  std::int32_t idx;
  bool operator<(const Cand& o) const {
    return d2 < o.d2 || (d2 == o.d2 && idx < o.idx);
  }
};

}  // namespace

NeighborLists approx_knn(const DataMatrix& X, const LandmarkSet& L, int k,
                         int k_prime) {
  const std::size_t p = L.points.k;
  if (X.d != L.points.d) throw DimMismatch("data and landmarks disagree on dimension");
  if (L.assignment.size() != X.n) throw DimMismatch("landmark assignment length != n");
  if (k < 1 || static_cast<std::size_t>(k) > p) throw ParamError("need 1 <= k <= p");
  if (static_cast<std::size_t>(k_prime) > p) throw ParamError("k_prime must be <= p");
  if (k_prime <= k && !(k_prime == k && static_cast<std::size_t>(k) == p))
    throw ParamError("k_prime must exceed k");
  instrument::knn_searches.fetch_add(1, std::memory_order_relaxed);

  // candidate lists: k_prime nearest landmarks of every landmark
  std::vector<std::int32_t> cand(p * static_cast<std::size_t>(k_prime));
  {
    const std::int64_t pp = static_cast<std::int64_t>(p);
#pragma omp parallel for schedule(static)
    for (std::int64_t a = 0; a < pp; ++a) {
      std::vector<Cand> row(p);
      const double* ra = L.points.row(static_cast<std::size_t>(a));
      for (std::size_t b = 0; b < p; ++b)
        row[b] = {dist2(ra, L.points.row(b), X.d), static_cast<std::int32_t>(b)};
      std::partial_sort(row.begin(), row.begin() + k_prime, row.end());
      for (int t = 0; t < k_prime; ++t)
        cand[static_cast<std::size_t>(a) * k_prime + t] = row[t].idx;
    }
  }

  NeighborLists out;
  out.n = X.n;
  out.p = p;
  out.k = k;
  out.k_prime = k_prime;
  out.idx.resize(X.n * static_cast<std::size_t>(k));
  out.dist2.resize(X.n * static_cast<std::size_t>(k));

  const std::int64_t n = static_cast<std::int64_t>(X.n);
#pragma omp parallel
  {
    std::vector<Cand> row(static_cast<std::size_t>(k_prime));
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const double* x = X.row(static_cast<std::size_t>(i));
      const std::int32_t* cl =
          cand.data() + static_cast<std::size_t>(L.assignment[i]) * k_prime;
      for (int t = 0; t < k_prime; ++t)
        row[t] = {dist2(x, L.points.row(static_cast<std::size_t>(cl[t])), X.d), cl[t]};
      std::partial_sort(row.begin(), row.begin() + k, row.end());
      for (int t = 0; t < k; ++t) {
        out.idx[static_cast<std::size_t>(i) * k + t] = row[t].idx;
        out.dist2[static_cast<std::size_t>(i) * k + t] = row[t].d2;
      }
    }
  }
  return out;
}

NeighborLists nested_neighbors(const NeighborLists& full, int k_j) {
  if (k_j < 1 || k_j > full.k) throw ParamError("need 1 <= k_j <= stored k");
  NeighborLists out;
  out.n = full.n;
  out.p = full.p;
  out.k = k_j;
  out.k_prime = full.k_prime;
  out.idx.resize(full.n * static_cast<std::size_t>(k_j));
  out.dist2.resize(full.n * static_cast<std::size_t>(k_j));
  for (std::size_t i = 0; i < full.n; ++i) {
    std::copy_n(full.row_idx(i), k_j, out.idx.data() + i * k_j);
    std::copy_n(full.row_dist2(i), k_j, out.dist2.data() + i * k_j);
  }
  return out;
}

double estimate_sigma(const NeighborLists& neighbors) {
  if (neighbors.n == 0 || neighbors.k < 1) throw ParamError("empty neighbor lists");
  double sum = 0.0;
  for (std::size_t i = 0; i < neighbors.n; ++i)
    sum += std::sqrt(neighbors.row_dist2(i)[neighbors.k - 1]);
  double sigma = sum / static_cast<double>(neighbors.n);
  return sigma > 0.0 ? sigma : 1.0;
}

SparseAffinity build_affinity(const NeighborLists& neighbors, double sigma) {
  if (!(sigma > 0.0)) throw ParamError("sigma must be > 0");
  SparseAffinity B;
  B.n = neighbors.n;
  B.p = neighbors.p;
  B.k = neighbors.k;
  B.sigma = sigma;
  B.idx = neighbors.idx;
  B.weight.resize(neighbors.dist2.size());
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const std::int64_t total = static_cast<std::int64_t>(B.weight.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t t = 0; t < total; ++t)
    B.weight[t] = std::max(std::exp(-neighbors.dist2[t] * inv), 1e-300);
  return B;
}

int default_k_prime(int k, std::size_t p) {
  int want = std::max(2 * k, 10);
  int capped = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(want), p));
  return std::max(capped, std::min(k + 1, static_cast<int>(p)));
}

std::vector<SparseAffinity> build_affinity_batch(
    const DataMatrix& X, const std::vector<LandmarkSet>& sets,
    const std::vector<int>& k_pool, int q) {
  if (sets.empty()) throw ParamError("need at least one landmark set");
  if (q < 1 || k_pool.empty() || k_pool.size() % static_cast<std::size_t>(q) != 0)
    throw ParamError("k_pool size must be a positive multiple of q");
  for (std::size_t t = 1; t < k_pool.size(); ++t)
    if (k_pool[t] <= k_pool[t - 1]) throw ParamError("k_pool must be strictly ascending");
  const std::size_t p = sets.front().points.k;
  if (static_cast<std::size_t>(k_pool.back()) > p)
    throw ParamError("largest K exceeds landmark count");

  const std::size_t groups = k_pool.size() / static_cast<std::size_t>(q);
  std::vector<SparseAffinity> out;
  out.reserve(sets.size() * static_cast<std::size_t>(q));
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const int* grp = k_pool.data() + (s % groups) * static_cast<std::size_t>(q);
    const int kq = grp[q - 1];
    NeighborLists full = approx_knn(X, sets[s], kq, default_k_prime(kq, p));
    double sigma = estimate_sigma(full);
    for (int j = 0; j < q; ++j)
      out.push_back(build_affinity(nested_neighbors(full, grp[j]), sigma));
  }
  return out;
}

}  // namespace lsec
