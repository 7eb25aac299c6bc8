#include "lsec/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lsec/rng.hpp"

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

// Per-point nearest-center scan. Writes to disjoint slots only, so the result
// is identical for any thread count.
void assign_into(const DataMatrix& X, const Centers& C, std::int32_t* labels,
                 double* best_d2) {
  const std::int64_t n = static_cast<std::int64_t>(X.n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double* x = X.row(static_cast<std::size_t>(i));
    double best = std::numeric_limits<double>::infinity();
    std::int32_t arg = 0;
    for (std::size_t c = 0; c < C.k; ++c) {
      double d2 = dist2(x, C.row(c), X.d);
      if (d2 < best) {
        best = d2;
        arg = static_cast<std::int32_t>(c);
      }
    }
    labels[i] = arg;
    best_d2[i] = best;
  }
}

// k-means++ seeding. D^2 updates run per point; the sampling scan is
// sequential, so the choice sequence is schedule-independent.
Centers seed_plusplus(const DataMatrix& X, int k, Rng& rng) {
  Centers C;
  C.k = static_cast<std::size_t>(k);
  C.d = X.d;
  C.values.resize(C.k * C.d);

  std::vector<double> d2(X.n, std::numeric_limits<double>::infinity());
  std::vector<char> chosen(X.n, 0);

  std::size_t first = rng.index(X.n);
  std::copy_n(X.row(first), X.d, C.row(0));
  chosen[first] = 1;

  const std::int64_t n = static_cast<std::int64_t>(X.n);
  for (int c = 1; c < k; ++c) {
    const double* prev = C.row(static_cast<std::size_t>(c - 1));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
      double v = dist2(X.row(static_cast<std::size_t>(i)), prev, X.d);
      if (v < d2[i]) d2[i] = v;
    }
    double total = 0.0;
    for (std::int64_t i = 0; i < n; ++i) total += d2[i];

    std::size_t pick = X.n;
    if (total > 0.0) {
      double r = rng.uniform() * total;
      double cum = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (r <= cum) {
          pick = static_cast<std::size_t>(i);
          break;
        }
      }
      if (pick == X.n) pick = X.n - 1;  // guard against rounding at the tail
    } else {
      // all mass on existing centers (duplicates); take the first free point
      for (std::size_t i = 0; i < X.n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
      if (pick == X.n) pick = rng.index(X.n);
    }
    chosen[pick] = 1;
    std::copy_n(X.row(pick), X.d, C.row(static_cast<std::size_t>(c)));
  }
  return C;
}

// Reseed empty clusters from the points farthest from their centers, then
// reassign. Each round strictly lowers inertia, so this terminates fast.
void repair_empty(const DataMatrix& X, Centers& C, std::vector<std::int32_t>& labels,
                  std::vector<double>& best_d2) {
  std::vector<std::int64_t> count(C.k);
  for (int round = 0; round < 64; ++round) {
    std::fill(count.begin(), count.end(), 0);
    for (auto l : labels) ++count[static_cast<std::size_t>(l)];
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < C.k; ++c)
      if (count[c] == 0) empty.push_back(c);
    if (empty.empty()) return;

    std::vector<char> taken(X.n, 0);
    for (std::size_t c : empty) {
      // farthest point whose donor cluster keeps at least one member
      double far = -1.0;
      std::size_t pick = X.n;
      for (std::size_t i = 0; i < X.n; ++i) {
        if (taken[i]) continue;
        if (count[static_cast<std::size_t>(labels[i])] < 2) continue;
        if (best_d2[i] > far) {
          far = best_d2[i];
          pick = i;
        }
      }
      if (pick == X.n) return;  // nothing eligible (duplicate-heavy data)
      taken[pick] = 1;
      --count[static_cast<std::size_t>(labels[pick])];
      ++count[c];
      std::copy_n(X.row(pick), X.d, C.row(c));
    }
    assign_into(X, C, labels.data(), best_d2.data());
  }
}

Centers update_centers(const DataMatrix& X, const Centers& C,
                       const std::vector<std::int32_t>& labels) {
  Centers next;
  next.k = C.k;
  next.d = C.d;
  next.values.assign(C.k * C.d, 0.0);
  std::vector<std::int64_t> count(C.k, 0);
  for (std::size_t i = 0; i < X.n; ++i) {
    auto c = static_cast<std::size_t>(labels[i]);
    ++count[c];
    const double* x = X.row(i);
    double* acc = next.row(c);
    for (std::size_t j = 0; j < X.d; ++j) acc[j] += x[j];
  }
  for (std::size_t c = 0; c < C.k; ++c) {
    if (count[c] > 0) {
      double inv = 1.0 / static_cast<double>(count[c]);
      double* r = next.row(c);
      for (std::size_t j = 0; j < C.d; ++j) r[j] *= inv;
    } else {
      std::copy_n(C.row(c), C.d, next.row(c));  // keep stale; repair handles it
    }
  }
  return next;
}

double center_shift(const Centers& a, const Centers& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double diff = a.values[i] - b.values[i];
    num += diff * diff;
    den += a.values[i] * a.values[i];
  }
  return std::sqrt(num) / (std::sqrt(den) + 1e-12);
}

}  // namespace

std::pair<LabelVector, double> assign_nearest(const DataMatrix& X, const Centers& C) {
  if (X.d != C.d) throw DimMismatch("data and centers disagree on dimension");
  if (C.k < 1) throw ParamError("need at least one center");
  LabelVector out;
  out.labels.resize(X.n);
  out.c = static_cast<std::int32_t>(C.k);
  std::vector<double> best_d2(X.n);
  assign_into(X, C, out.labels.data(), best_d2.data());
  double inertia = std::accumulate(best_d2.begin(), best_d2.end(), 0.0);
  return {std::move(out), inertia};
}

KmeansResult kmeans(const DataMatrix& X, int k, std::uint64_t seed, KmeansOpts opts) {
  if (k < 1 || static_cast<std::size_t>(k) > X.n)
    throw ParamError("kmeans needs 1 <= k <= n");
  if (opts.max_iter < 1) throw ParamError("max_iter must be >= 1");

  Rng rng(derive_seed(seed, 0x6B));
  KmeansResult res;
  res.centers = seed_plusplus(X, k, rng);

  std::vector<std::int32_t> labels(X.n);
  std::vector<double> best_d2(X.n);

  for (int it = 0; it < opts.max_iter; ++it) {
    assign_into(X, res.centers, labels.data(), best_d2.data());
    repair_empty(X, res.centers, labels, best_d2);
    res.inertia_trace.push_back(std::accumulate(best_d2.begin(), best_d2.end(), 0.0));
    res.iterations = it + 1;

    Centers next = update_centers(X, res.centers, labels);
    double shift = center_shift(res.centers, next);
    res.centers = std::move(next);
    if (shift < opts.tol) break;
  }

  assign_into(X, res.centers, labels.data(), best_d2.data());
  repair_empty(X, res.centers, labels, best_d2);
  res.inertia = std::accumulate(best_d2.begin(), best_d2.end(), 0.0);
  res.inertia_trace.push_back(res.inertia);
  res.labels.labels = std::move(labels);
  res.labels.c = k;
  return res;
}

std::size_t default_rep_count(std::size_t n, int k) {
  std::size_t want = std::max<std::size_t>(10 * static_cast<std::size_t>(k), 1000);
  return std::min(n, want);
}

KmeansResult light_kmeans(const DataMatrix& X, int k, std::size_t p_rep,
                          std::uint64_t seed, KmeansOpts opts) {
  if (k < 1) throw ParamError("light_kmeans needs k >= 1");
  if (p_rep < static_cast<std::size_t>(k) || p_rep > X.n)
    throw ParamError("light_kmeans needs k <= p_rep <= n");

  KmeansResult fit;
  if (p_rep == X.n) {
    fit = kmeans(X, k, seed, opts);
  } else {
    // partial Fisher-Yates: first p_rep slots are a uniform sample
    Rng rng(derive_seed(seed, 0x11));
    std::vector<std::size_t> idx(X.n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < p_rep; ++i) {
      std::size_t j = i + rng.index(X.n - i);
      std::swap(idx[i], idx[j]);
    }
    DataMatrix sub;
    sub.n = p_rep;
    sub.d = X.d;
    sub.values.resize(p_rep * X.d);
    for (std::size_t i = 0; i < p_rep; ++i)
      std::copy_n(X.row(idx[i]), X.d, sub.row(i));
    fit = kmeans(sub, k, seed, opts);
  }

  KmeansResult res;
  res.centers = std::move(fit.centers);
  res.iterations = fit.iterations;
  res.inertia_trace = std::move(fit.inertia_trace);  // trace of the fit stage
  auto [labels, inertia] = assign_nearest(X, res.centers);
  res.labels = std::move(labels);
  res.labels.c = k;
  res.inertia = inertia;
  return res;
}

KmeansResult light_kmeans(const DataMatrix& X, int k, std::uint64_t seed) {
  return light_kmeans(X, k, default_rep_count(X.n, k), seed);
}

}  // namespace lsec
