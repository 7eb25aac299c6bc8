#pragma once

#include <cstdint>
#include <vector>

#include "lsec/knn_affinity.hpp"
#include "lsec/rng.hpp"
#include "lsec/types.hpp"

namespace lsec {

struct EnsembleParams {
  int m = 20;                          // base clusterings
  int q = 4;                           // K values consumed per landmark set
  std::vector<int> k_list = {2, 3, 4, 5};  // ascending K pool, |k_list| % q == 0
  int p = 1000;                        // landmarks per set
  int alpha = 50;                      // selection budget bound
  int c_min = 20;
  int c_max = 60;
  std::uint64_t seed = 0;

  void validate(std::size_t n) const;
};

struct BaseClustering {
  LabelVector labels;  // compacted; labels.c = surviving cluster count
  int c_drawn = 0;     // cluster count requested for this partition
  int set_index = 0;   // which landmark set produced it
  int k_index = 0;     // position within that set's K group
  std::uint64_t seed = 0;
};

struct Ensemble {
  std::vector<BaseClustering> base;  // ordered set-major, then K-major
  EnsembleParams params;
  int clamped_draws = 0;  // draws cut down to the surviving landmark count
};

/// c = floor(tau * (c_max - c_min)) + c_min.
int cluster_count_from_tau(double tau, int c_min, int c_max);
int draw_cluster_count(int c_min, int c_max, Rng& rng);

// Per-base seed streams; exposed so runs are reproducible piecewise.
std::uint64_t ensemble_draw_seed(std::uint64_t seed, int set_index, int k_index);
std::uint64_t ensemble_partition_seed(std::uint64_t seed, int set_index, int k_index);

Ensemble generate_ensemble(const DataMatrix& X, const EnsembleParams& params);

}  // namespace lsec
