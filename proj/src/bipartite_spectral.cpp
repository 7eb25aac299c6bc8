#include "lsec/bipartite_spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "lsec/kmeans.hpp"

namespace lsec {

BipartiteDegrees degrees(const BipartiteEdges& B) {
  if (B.n == 0 || B.p == 0 || B.row_len < 1) throw ParamError("empty bipartite graph");
  BipartiteDegrees deg;
  deg.d_x.assign(B.n, 0.0);
  deg.d_r.assign(B.p, 0.0);
  for (std::size_t i = 0; i < B.n; ++i) {
    const std::int32_t* idx = B.idx + i * static_cast<std::size_t>(B.row_len);
    const double* w = B.weight ? B.weight + i * static_cast<std::size_t>(B.row_len) : nullptr;
    double sum = 0.0;
    for (int t = 0; t < B.row_len; ++t) {
      double v = w ? w[t] : 1.0;
      sum += v;
      deg.d_r[static_cast<std::size_t>(idx[t])] += v;
    }
    if (!(sum > 0.0)) throw DegenerateGraph("point " + std::to_string(i) + " has zero degree");
    deg.d_x[i] = sum;
  }
  return deg;
}

BipartiteDegrees degrees(const SparseAffinity& B) { return degrees(edges_of(B)); }

ReducedLaplacian reduced_laplacian(const BipartiteEdges& B, const BipartiteDegrees& deg) {
  if (deg.d_x.size() != B.n || deg.d_r.size() != B.p)
    throw DimMismatch("degree vectors do not match the graph");
  for (double v : deg.d_x)
    if (!(v > 0.0)) throw DegenerateGraph("zero point degree");

  ReducedLaplacian red;
  std::vector<std::int32_t> pos(B.p, -1);
  for (std::size_t j = 0; j < B.p; ++j) {
    if (deg.d_r[j] > 0.0) {
      pos[j] = static_cast<std::int32_t>(red.col_map.size());
      red.col_map.push_back(static_cast<std::int32_t>(j));
      red.d_r.push_back(deg.d_r[j]);
    }
  }
  const std::size_t s = red.col_map.size();
  red.size = s;
  red.L.assign(s * s, 0.0);

  // accumulate B^T D_X^{-1} B on the upper triangle, then mirror
  for (std::size_t i = 0; i < B.n; ++i) {
    const std::int32_t* idx = B.idx + i * static_cast<std::size_t>(B.row_len);
    const double* w = B.weight ? B.weight + i * static_cast<std::size_t>(B.row_len) : nullptr;
    double inv = 1.0 / deg.d_x[i];
    for (int a = 0; a < B.row_len; ++a) {
      std::int32_t pa = pos[static_cast<std::size_t>(idx[a])];
      if (pa < 0) continue;  // zero-weight edge into a dropped column
      std::size_t ca = static_cast<std::size_t>(pa);
      double wa = (w ? w[a] : 1.0) * inv;
      for (int b = a; b < B.row_len; ++b) {
        std::int32_t pb = pos[static_cast<std::size_t>(idx[b])];
        if (pb < 0) continue;
        std::size_t cb = static_cast<std::size_t>(pb);
        double v = wa * (w ? w[b] : 1.0);
        if (ca <= cb)
          red.L[ca * s + cb] -= v;
        else
          red.L[cb * s + ca] -= v;
      }
    }
  }
  for (std::size_t a = 0; a < s; ++a) {
    red.L[a * s + a] += red.d_r[a];
    for (std::size_t b = a + 1; b < s; ++b) red.L[b * s + a] = red.L[a * s + b];
  }
  return red;
}

EigenPairs bottom_eigen(const ReducedLaplacian& red, int c) {
  const std::size_t s = red.size;
  if (c < 1 || static_cast<std::size_t>(c) > s)
    throw ParamError("need 1 <= c <= surviving column count");

  Eigen::MatrixXd S(s, s);
  std::vector<double> isqrt(s);
  for (std::size_t j = 0; j < s; ++j) isqrt[j] = 1.0 / std::sqrt(red.d_r[j]);
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b)
      S(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          red.L[a * s + b] * isqrt[a] * isqrt[b];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("eigensolver failed on reduced Laplacian");

  EigenPairs out;
  out.size = s;
  out.c = static_cast<std::size_t>(c);
  out.values.resize(out.c);
  out.vectors.resize(s * out.c);
  for (int l = 0; l < c; ++l) {
    out.values[static_cast<std::size_t>(l)] = solver.eigenvalues()(l);
    for (std::size_t j = 0; j < s; ++j)
      out.vectors[j * out.c + static_cast<std::size_t>(l)] =
          solver.eigenvectors()(static_cast<Eigen::Index>(j), l) * isqrt[j];
  }
  return out;
}

Embedding lift_embedding(const BipartiteEdges& B, const BipartiteDegrees& deg,
                         const std::vector<std::int32_t>& col_map,
                         const EigenPairs& pairs, bool row_normalize) {
  if (pairs.size != col_map.size())
    throw DimMismatch("eigenvector rows do not match surviving columns");
  std::vector<std::int32_t> pos(B.p, -1);
  for (std::size_t t = 0; t < col_map.size(); ++t)
    pos[static_cast<std::size_t>(col_map[t])] = static_cast<std::int32_t>(t);

  for (std::size_t t = 0; t < B.n * static_cast<std::size_t>(B.row_len); ++t)
    if (pos[static_cast<std::size_t>(B.idx[t])] < 0)
      throw DimMismatch("edge touches a dropped column");

  Embedding emb;
  emb.n = B.n;
  emb.c = pairs.c;
  emb.eigenvalues = pairs.values;
  emb.vectors.assign(B.n * pairs.c, 0.0);

  const std::int64_t n = static_cast<std::int64_t>(B.n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int32_t* idx = B.idx + static_cast<std::size_t>(i) * B.row_len;
    const double* w = B.weight ? B.weight + static_cast<std::size_t>(i) * B.row_len : nullptr;
    double* row = emb.vectors.data() + static_cast<std::size_t>(i) * pairs.c;
    for (int t = 0; t < B.row_len; ++t) {
      std::int32_t pj = pos[static_cast<std::size_t>(idx[t])];
      const double* v = pairs.vectors.data() + static_cast<std::size_t>(pj) * pairs.c;
      double wt = w ? w[t] : 1.0;
      for (std::size_t l = 0; l < pairs.c; ++l) row[l] += wt * v[l];
    }
    double inv = 1.0 / deg.d_x[static_cast<std::size_t>(i)];
    for (std::size_t l = 0; l < pairs.c; ++l) row[l] *= inv;
    if (row_normalize) {
      double norm2 = 0.0;
      for (std::size_t l = 0; l < pairs.c; ++l) norm2 += row[l] * row[l];
      if (norm2 > 0.0) {
        double inv_norm = 1.0 / std::sqrt(norm2);
        for (std::size_t l = 0; l < pairs.c; ++l) row[l] *= inv_norm;
      }
    }
  }
  return emb;
}

LabelVector spectral_partition(const SparseAffinity& B, int c, std::uint64_t seed,
                               bool use_light, const SpectralOptions& opts) {
  if (c < 2) throw ParamError("spectral_partition needs c >= 2");
  BipartiteEdges E = edges_of(B);
  BipartiteDegrees deg = degrees(E);
  ReducedLaplacian red = reduced_laplacian(E, deg);

  int want = opts.keep_trivial ? c : c + 1;
  if (static_cast<std::size_t>(want) > red.size)
    throw ParamError("cluster count exceeds surviving landmark count");
  EigenPairs pairs = bottom_eigen(red, want);
  if (!opts.keep_trivial) {
    EigenPairs trimmed;
    trimmed.size = pairs.size;
    trimmed.c = static_cast<std::size_t>(c);
    trimmed.values.assign(pairs.values.begin() + 1, pairs.values.end());
    trimmed.vectors.resize(pairs.size * trimmed.c);
    for (std::size_t j = 0; j < pairs.size; ++j)
      std::copy_n(pairs.vectors.data() + j * pairs.c + 1, trimmed.c,
                  trimmed.vectors.data() + j * trimmed.c);
    pairs = std::move(trimmed);
  }

  Embedding emb = lift_embedding(E, deg, red.col_map, pairs, opts.row_normalize);
  DataMatrix U;
  U.n = emb.n;
  U.d = emb.c;
  U.values = std::move(emb.vectors);
  KmeansResult km = use_light ? light_kmeans(U, c, seed) : kmeans(U, c, seed);
  return km.labels;
}

}  // namespace lsec
