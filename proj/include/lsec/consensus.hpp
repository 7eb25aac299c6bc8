#pragma once

#include <cstdint>
#include <vector>

#include "lsec/bipartite_spectral.hpp"
#include "lsec/ensemble.hpp"
#include "lsec/types.hpp"

namespace lsec {

/// Unweighted point-to-cluster incidence over all base clusterings. Every
/// point carries exactly one edge per base clustering, so rows sum to m and
/// the total edge count is n*m.
struct IndicatorGraph {
  std::size_t n = 0;
  int m = 0;
  std::int64_t total_clusters = 0;        // C, summed over base clusterings
  std::vector<std::int32_t> cols;         // n*m column ids, base-major per row
  std::vector<std::int32_t> col_size;     // C cluster sizes
  std::vector<std::int32_t> cluster_owner;  // C -> base clustering index
  std::vector<std::int32_t> block_offset;   // m+1 column offsets per base
};

inline BipartiteEdges edges_of(const IndicatorGraph& G) {
  return {G.n, static_cast<std::size_t>(G.total_clusters), G.m, G.cols.data(), nullptr};
}

/// Columns are laid out in ensemble order, then by cluster id within a base.
IndicatorGraph build_indicator(const Ensemble& E);
IndicatorGraph build_indicator(const std::vector<BaseClustering>& base);

/// Reduced eigenproblem of the point-cluster graph, lifted to the point side.
Embedding consensus_embedding(const IndicatorGraph& G, int c_tilde,
                              const SpectralOptions& opts = {});

/// Plain k-means on the embedding rows; exactly c_tilde clusters.
LabelVector consensus_cluster(const Embedding& emb, int c_tilde, std::uint64_t seed);

std::uint64_t consensus_kmeans_seed(std::uint64_t seed);

struct StageTiming {
  double generation_s = 0.0;
  double consensus_s = 0.0;
  double total_s = 0.0;
};

struct ConsensusResult {
  LabelVector labels;
  Embedding embedding;
  Ensemble ensemble;
  StageTiming timing;
};

/// End-to-end pipeline; `seed` overrides params.seed so one value drives
/// both stages.
ConsensusResult run_lsec(const DataMatrix& X, EnsembleParams params, int c_tilde,
                         std::uint64_t seed);

}  // namespace lsec
