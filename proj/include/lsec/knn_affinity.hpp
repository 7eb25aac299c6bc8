#pragma once

#include <cstdint>
#include <vector>

#include "lsec/landmarks.hpp"
#include "lsec/types.hpp"

namespace lsec {

/// Per-point nearest-landmark lists, ascending by (squared distance, index).
struct NeighborLists {
  std::size_t n = 0;
  std::size_t p = 0;        // landmark count the indices refer to
  int k = 0;                // neighbors stored per point
  int k_prime = 0;          // candidate-stage width used to build the lists
  std::vector<std::int32_t> idx;  // n*k
  std::vector<double> dist2;      // n*k

  const std::int32_t* row_idx(std::size_t i) const { return idx.data() + i * k; }
  const double* row_dist2(std::size_t i) const { return dist2.data() + i * k; }
};

/// Row-sparse n x p nonnegative point-to-landmark similarity, fixed row width.
struct SparseAffinity {
  std::size_t n = 0;
  std::size_t p = 0;
  int k = 0;                      // nonzeros per row
  std::vector<std::int32_t> idx;  // n*k landmark indices
  std::vector<double> weight;     // n*k weights in (0,1]
  double sigma = 0.0;

  const std::int32_t* row_idx(std::size_t i) const { return idx.data() + i * k; }
  const double* row_weight(std::size_t i) const { return weight.data() + i * k; }
};

/// Approximate K-nearest landmarks: candidates for x_i are the k_prime
/// landmarks nearest to x_i's own landmark, ranked by exact distance to x_i.
/// k_prime == p degenerates to exact search.
NeighborLists approx_knn(const DataMatrix& X, const LandmarkSet& L, int k,
                         int k_prime);

/// Length-k_j prefix of already-computed lists; no distance recomputation.
NeighborLists nested_neighbors(const NeighborLists& full, int k_j);

/// Gaussian bandwidth: mean distance to the farthest stored neighbor
/// (1.0 when every stored distance is zero).
double estimate_sigma(const NeighborLists& neighbors);

/// exp(-d^2 / (2 sigma^2)) per stored pair, clamped below at 1e-300.
SparseAffinity build_affinity(const NeighborLists& neighbors, double sigma);

/// Candidate-stage width used when none is given.
int default_k_prime(int k, std::size_t p);

/// One affinity per (landmark set, K value). k_pool is consumed q values at a
/// time: set i uses the (i mod k_pool.size()/q)-th ascending group, with a
/// single KNN search at the group maximum reused for all its prefixes.
/// q == k_pool.size() gives every set the same K list.
std::vector<SparseAffinity> build_affinity_batch(
    const DataMatrix& X, const std::vector<LandmarkSet>& sets,
    const std::vector<int>& k_pool, int q);

}  // namespace lsec
