#include "lsec/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lsec/instrument.hpp"
#include "lsec/kmeans.hpp"
#include "lsec/rng.hpp"

namespace lsec {

double rss(const DataMatrix& X, const Centers& R,
           const std::vector<std::int32_t>& assignment) {
  if (X.d != R.d) throw DimMismatch("data and landmarks disagree on dimension");
  if (assignment.size() != X.n) throw DimMismatch("assignment length != n");
  double total = 0.0;
  for (std::size_t i = 0; i < X.n; ++i) {
    auto a = assignment[i];
    if (a < 0 || static_cast<std::size_t>(a) >= R.k)
      throw ParamError("assignment index out of range");
    const double* x = X.row(i);
    const double* r = R.row(static_cast<std::size_t>(a));
    for (std::size_t j = 0; j < X.d; ++j) {
      double diff = x[j] - r[j];
      total += diff * diff;
    }
  }
  return total;
}

namespace {

// Budget split across chunks: proportional to chunk size, each at least 1,
// capped by chunk size; the alpha cap is dropped when it cannot reach p.
std::vector<int> allocate_budgets(const std::vector<std::size_t>& sizes, int p,
                                  int alpha) {
  std::size_t h = sizes.size();
  std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::vector<std::int64_t> cap(h);
  std::int64_t cap_sum = 0;
  for (std::size_t i = 0; i < h; ++i) {
    cap[i] = std::min<std::int64_t>(alpha, static_cast<std::int64_t>(sizes[i]));
    cap_sum += cap[i];
  }
  if (cap_sum < p)
    for (std::size_t i = 0; i < h; ++i) cap[i] = static_cast<std::int64_t>(sizes[i]);

  std::vector<int> k(h);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < h; ++i) {
    std::int64_t share = static_cast<std::int64_t>(
        static_cast<double>(p) * static_cast<double>(sizes[i]) /
        static_cast<double>(total));
    k[i] = static_cast<int>(std::clamp<std::int64_t>(share, 1, cap[i]));
    assigned += k[i];
  }
  // settle rounding: grow the chunks with the most remaining capacity first,
  // shrink the smallest-per-landmark chunks first; index breaks ties
  while (assigned < p) {
    std::size_t best = h;
    std::int64_t best_slack = 0;
    for (std::size_t i = 0; i < h; ++i) {
      std::int64_t slack = cap[i] - k[i];
      if (slack > best_slack) {
        best_slack = slack;
        best = i;
      }
    }
    if (best == h) break;  // all caps hit; only possible when p > sum(sizes)
    ++k[best];
    ++assigned;
  }
  while (assigned > p) {
    std::size_t best = h;
    double best_load = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < h; ++i) {
      if (k[i] <= 1) continue;
      double load = static_cast<double>(sizes[i]) / static_cast<double>(k[i]);
      if (load < best_load) {
        best_load = load;
        best = i;
      }
    }
    --k[best];
    --assigned;
  }
  return k;
}

void select_recursive(const DataMatrix& X, int p, int alpha, std::uint64_t seed,
                      std::vector<double>& out_points) {
  const std::size_t n = X.n;
  if (p == static_cast<int>(n)) {
    out_points.insert(out_points.end(), X.values.begin(), X.values.end());
    return;
  }
  if (n <= 10 * static_cast<std::size_t>(p)) {
    KmeansResult km = kmeans(X, p, derive_seed(seed, 0x01));
    out_points.insert(out_points.end(), km.centers.values.begin(),
                      km.centers.values.end());
    return;
  }
  int h = (p + alpha - 1) / alpha;
  if (h <= 1) {
    KmeansResult km = light_kmeans(X, p, derive_seed(seed, 0x02));
    out_points.insert(out_points.end(), km.centers.values.begin(),
                      km.centers.values.end());
    return;
  }

  KmeansResult split = light_kmeans(X, h, derive_seed(seed, 0x03));
  std::vector<std::vector<std::size_t>> chunk(static_cast<std::size_t>(h));
  for (std::size_t i = 0; i < n; ++i)
    chunk[static_cast<std::size_t>(split.labels.labels[i])].push_back(i);

  std::vector<std::size_t> sizes(chunk.size());
  for (std::size_t i = 0; i < chunk.size(); ++i) sizes[i] = chunk[i].size();
  std::vector<int> budget = allocate_budgets(sizes, p, alpha);

  for (std::size_t i = 0; i < chunk.size(); ++i) {
    DataMatrix sub;
    sub.n = chunk[i].size();
    sub.d = X.d;
    sub.values.resize(sub.n * sub.d);
    for (std::size_t r = 0; r < sub.n; ++r)
      std::copy_n(X.row(chunk[i][r]), X.d, sub.row(r));
    select_recursive(sub, budget[i], alpha, derive_seed(seed, 0x04, i), out_points);
  }
}

inline double point_dist2(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double diff = a[j] - b[j];
    s += diff * diff;
  }
  return s;
}

// Nearest-landmark assignment with empty-landmark repair: an unused landmark
// is moved onto the point farthest from its current landmark. Repair rounds
// only test points against the landmarks that moved; stationary landmarks
// cannot change any point's argmin, and an empty landmark owned no points,
// so the incremental update reproduces a full reassignment exactly
// (including the lowest-index tie rule).
void finalize(const DataMatrix& X, LandmarkSet& L) {
  auto [labels, inertia] = assign_nearest(X, L.points);
  L.assignment = std::move(labels.labels);

  std::vector<double> best_d2(X.n);
  const std::int64_t n = static_cast<std::int64_t>(X.n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i)
    best_d2[i] = point_dist2(X.row(static_cast<std::size_t>(i)),
                             L.points.row(static_cast<std::size_t>(
                                 L.assignment[static_cast<std::size_t>(i)])),
                             X.d);

  std::vector<std::int64_t> count(L.points.k);
  for (int round = 0; round < 64; ++round) {
    std::fill(count.begin(), count.end(), 0);
    for (auto a : L.assignment) ++count[static_cast<std::size_t>(a)];
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < L.points.k; ++j)
      if (count[j] == 0) empty.push_back(j);
    if (empty.empty()) break;

    std::vector<char> taken(X.n, 0);
    std::vector<std::size_t> moved;
    for (std::size_t j : empty) {
      double far = -1.0;
      std::size_t pick = X.n;
      for (std::size_t i = 0; i < X.n; ++i) {
        if (taken[i]) continue;
        if (count[static_cast<std::size_t>(L.assignment[i])] < 2) continue;
        if (best_d2[i] > far) {
          far = best_d2[i];
          pick = i;
        }
      }
      if (pick == X.n) continue;
      taken[pick] = 1;
      --count[static_cast<std::size_t>(L.assignment[pick])];
      ++count[j];
      std::copy_n(X.row(pick), X.d, L.points.row(j));
      moved.push_back(j);
    }
    if (moved.empty()) break;
    std::sort(moved.begin(), moved.end());

#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      const double* x = X.row(static_cast<std::size_t>(i));
      for (std::size_t j : moved) {
        double d = point_dist2(x, L.points.row(j), X.d);
        auto cur = static_cast<std::size_t>(L.assignment[i]);
        if (d < best_d2[i] || (d == best_d2[i] && j < cur)) {
          best_d2[i] = d;
          L.assignment[i] = static_cast<std::int32_t>(j);
        }
      }
    }
  }
  L.rss = std::accumulate(best_d2.begin(), best_d2.end(), 0.0);
}

}  // namespace

LandmarkSet select_landmarks(const DataMatrix& X, int p, int alpha,
                             std::uint64_t seed) {
  if (p < 1 || static_cast<std::size_t>(p) > X.n)
    throw ParamError("select_landmarks needs 1 <= p <= n");
  if (alpha < 1) throw ParamError("alpha must be >= 1");
  instrument::landmark_selections.fetch_add(1, std::memory_order_relaxed);

  LandmarkSet L;
  L.points.k = static_cast<std::size_t>(p);
  L.points.d = X.d;
  L.points.values.reserve(L.points.k * X.d);
  select_recursive(X, p, alpha, seed, L.points.values);
  finalize(X, L);
  return L;
}

std::uint64_t landmark_set_seed(std::uint64_t seed, int set_index) {
  return derive_seed(seed, 0x1A, static_cast<std::uint64_t>(set_index));
}

std::vector<LandmarkSet> gen_landmark_sets(const DataMatrix& X, int num_sets,
                                           int p, int alpha, std::uint64_t seed) {
  if (num_sets < 1) throw ParamError("need num_sets >= 1");
  std::vector<LandmarkSet> out;
  out.reserve(static_cast<std::size_t>(num_sets));
  for (int s = 0; s < num_sets; ++s)
    out.push_back(select_landmarks(X, p, alpha, landmark_set_seed(seed, s)));
  return out;
}

}  // namespace lsec
