#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lsec/types.hpp"

namespace lsec {

struct KmeansOpts {
  int max_iter = 100;
  double tol = 1e-4;  // relative center movement
};

struct KmeansResult {
  Centers centers;
  LabelVector labels;
  double inertia = 0.0;
  int iterations = 0;
  // Inertia after each assignment pass; non-increasing for Lloyd iterations.
  std::vector<double> inertia_trace;
};

/// Label every point with its nearest center (squared Euclidean, ties to the
/// lowest center index) and return the summed squared distance.
std::pair<LabelVector, double> assign_nearest(const DataMatrix& X, const Centers& C);

/// Lloyd k-means with k-means++ seeding. Empty clusters are reseeded from the
/// point currently farthest from its center, so all k clusters end non-empty.
KmeansResult kmeans(const DataMatrix& X, int k, std::uint64_t seed, KmeansOpts opts = {});

/// Fit centers on a uniform sample of p_rep points, then label all of X by a
/// single nearest-center pass. p_rep == n reproduces kmeans() exactly.
KmeansResult light_kmeans(const DataMatrix& X, int k, std::size_t p_rep,
                          std::uint64_t seed, KmeansOpts opts = {});

/// Sample size used when light_kmeans is called without an explicit p_rep.
std::size_t default_rep_count(std::size_t n, int k);

KmeansResult light_kmeans(const DataMatrix& X, int k, std::uint64_t seed);

}  // namespace lsec
