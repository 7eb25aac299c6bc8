#pragma once

#include <cstdint>
#include <vector>

#include "lsec/types.hpp"

namespace lsec {

struct LandmarkSet {
  Centers points;                       // p x d landmarks
  std::vector<std::int32_t> assignment; // nearest landmark per point
  double rss = 0.0;
};

/// Residual sum of squares of X against landmarks R under a fixed assignment.
double rss(const DataMatrix& X, const Centers& R,
           const std::vector<std::int32_t>& assignment);

/// Divide-and-conquer landmark selection: small problems are solved by
/// k-means directly; large ones are split into ceil(p/alpha) chunks with
/// light-k-means and solved recursively under proportional budgets.
LandmarkSet select_landmarks(const DataMatrix& X, int p, int alpha,
                             std::uint64_t seed);

/// num_sets independent selections on per-set seed streams.
std::vector<LandmarkSet> gen_landmark_sets(const DataMatrix& X, int num_sets,
                                           int p, int alpha, std::uint64_t seed);

/// Seed stream feeding selection number `set_index`.
std::uint64_t landmark_set_seed(std::uint64_t seed, int set_index);

}  // namespace lsec
