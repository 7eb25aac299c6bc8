#pragma once

#include <cstdint>
#include <vector>

#include "lsec/knn_affinity.hpp"
#include "lsec/types.hpp"

namespace lsec {

/// Read-only edge view of a point-to-landmark (or point-to-cluster) bipartite
/// graph with a fixed number of edges per point. weight == nullptr means all
/// edges weigh 1.
struct BipartiteEdges {
  std::size_t n = 0;
  std::size_t p = 0;
  int row_len = 0;
  const std::int32_t* idx = nullptr;
  const double* weight = nullptr;
};

inline BipartiteEdges edges_of(const SparseAffinity& B) {
  return {B.n, B.p, B.k, B.idx.data(), B.weight.data()};
}

struct BipartiteDegrees {
  std::vector<double> d_x;  // per-point edge weight sums, strictly positive
  std::vector<double> d_r;  // per-landmark sums, may contain zeros
};

/// Reduced graph Laplacian over the landmarks that have at least one edge.
struct ReducedLaplacian {
  std::size_t size = 0;
  std::vector<double> L;             // size x size, row-major, symmetric PSD
  std::vector<double> d_r;           // degrees of the surviving columns
  std::vector<std::int32_t> col_map; // surviving position -> original column
};

struct EigenPairs {
  std::size_t size = 0;  // rows of vectors
  std::size_t c = 0;     // columns
  std::vector<double> vectors;  // size x c, row-major, D_R-orthonormal columns
  std::vector<double> values;   // ascending
};

/// Point-side embedding lifted from the landmark-side eigenvectors.
struct Embedding {
  std::size_t n = 0;
  std::size_t c = 0;
  std::vector<double> vectors;  // n x c, row-major
  std::vector<double> eigenvalues;

  const double* row(std::size_t i) const { return vectors.data() + i * c; }
};

struct SpectralOptions {
  bool keep_trivial = true;   // keep the constant bottom eigenvector
  bool row_normalize = true;  // L2-normalize embedding rows (zero rows kept)
};

BipartiteDegrees degrees(const BipartiteEdges& B);
BipartiteDegrees degrees(const SparseAffinity& B);

ReducedLaplacian reduced_laplacian(const BipartiteEdges& B, const BipartiteDegrees& deg);

/// c smallest generalized eigenpairs of L v = lambda diag(d_r) v, solved on
/// the symmetric whitening diag(d_r)^{-1/2} L diag(d_r)^{-1/2}.
EigenPairs bottom_eigen(const ReducedLaplacian& red, int c);

Embedding lift_embedding(const BipartiteEdges& B, const BipartiteDegrees& deg,
                         const std::vector<std::int32_t>& col_map,
                         const EigenPairs& pairs, bool row_normalize = true);

/// Full transfer: degrees -> reduced Laplacian -> bottom eigenvectors ->
/// lifted embedding -> (light-)k-means with c clusters.
LabelVector spectral_partition(const SparseAffinity& B, int c, std::uint64_t seed,
                               bool use_light, const SpectralOptions& opts = {});

}  // namespace lsec
