#include "lsec/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "lsec/bipartite_spectral.hpp"
#include "lsec/landmarks.hpp"

namespace lsec {

void EnsembleParams::validate(std::size_t n) const {
  if (m < 1 || q < 1) throw ParamError("need m >= 1 and q >= 1");
  if (m % q != 0) throw ParamError("q must divide m");
  if (k_list.empty() || k_list.size() % static_cast<std::size_t>(q) != 0)
    throw ParamError("K list size must be a positive multiple of q");
  for (std::size_t t = 1; t < k_list.size(); ++t)
    if (k_list[t] <= k_list[t - 1]) throw ParamError("K list must be strictly ascending");
  if (k_list.front() < 1) throw ParamError("K values must be >= 1");
  if (k_list.back() > p) throw ParamError("largest K exceeds landmark count p");
  if (p < 1 || static_cast<std::size_t>(p) > n) throw ParamError("need 1 <= p <= n");
  if (alpha < 1) throw ParamError("alpha must be >= 1");
  if (c_min < 2 || c_min > c_max) throw ParamError("need 2 <= c_min <= c_max");
}

int cluster_count_from_tau(double tau, int c_min, int c_max) {
  if (c_min > c_max) throw ParamError("c_min must be <= c_max");
  if (tau < 0.0 || tau > 1.0) throw ParamError("tau must lie in [0,1]");
  return static_cast<int>(std::floor(tau * (c_max - c_min))) + c_min;
}

int draw_cluster_count(int c_min, int c_max, Rng& rng) {
  return cluster_count_from_tau(rng.uniform_closed(), c_min, c_max);
}

std::uint64_t ensemble_draw_seed(std::uint64_t seed, int set_index, int k_index) {
  return derive_seed(seed, 0xD7, static_cast<std::uint64_t>(set_index),
                     static_cast<std::uint64_t>(k_index));
}

std::uint64_t ensemble_partition_seed(std::uint64_t seed, int set_index, int k_index) {
  return derive_seed(seed, 0x5E, static_cast<std::uint64_t>(set_index),
                     static_cast<std::uint64_t>(k_index));
}

Ensemble generate_ensemble(const DataMatrix& X, const EnsembleParams& params) {
  params.validate(X.n);

  Ensemble ens;
  ens.params = params;
  const int num_sets = params.m / params.q;
  const std::size_t groups = params.k_list.size() / static_cast<std::size_t>(params.q);

  std::vector<LandmarkSet> sets =
      gen_landmark_sets(X, num_sets, params.p, params.alpha, params.seed);

  for (int i = 0; i < num_sets; ++i) {
    const int* grp = params.k_list.data() +
                     (static_cast<std::size_t>(i) % groups) * static_cast<std::size_t>(params.q);
    const int kq = grp[params.q - 1];
    NeighborLists full =
        approx_knn(X, sets[static_cast<std::size_t>(i)], kq,
                   default_k_prime(kq, sets[static_cast<std::size_t>(i)].points.k));
    double sigma = estimate_sigma(full);

    for (int j = 0; j < params.q; ++j) {
      SparseAffinity B = build_affinity(nested_neighbors(full, grp[j]), sigma);

      Rng draw_rng(ensemble_draw_seed(params.seed, i, j));
      int c_drawn = draw_cluster_count(params.c_min, params.c_max, draw_rng);

      // the eigenproblem cannot produce more clusters than surviving columns
      BipartiteDegrees deg = degrees(B);
      int survived = 0;
      for (double v : deg.d_r)
        if (v > 0.0) ++survived;
      int c_eff = c_drawn;
      if (c_eff > survived) {
        c_eff = survived;
        ++ens.clamped_draws;
      }

      BaseClustering bc;
      bc.c_drawn = c_drawn;
      bc.set_index = i;
      bc.k_index = j;
      bc.seed = ensemble_partition_seed(params.seed, i, j);
      if (c_eff < 2) {
        bc.labels.labels.assign(X.n, 0);
        bc.labels.c = 1;
      } else {
        LabelVector raw = spectral_partition(B, c_eff, bc.seed, /*use_light=*/true);
        bc.labels = compact_labels(raw.labels);
      }
      ens.base.push_back(std::move(bc));
    }
  }
  return ens;
}

}  // namespace lsec
