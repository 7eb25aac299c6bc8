#include "lsec/consensus.hpp"

#include <chrono>

#include "lsec/kmeans.hpp"

namespace lsec {

IndicatorGraph build_indicator(const std::vector<BaseClustering>& base) {
  if (base.empty()) throw MalformedEnsemble("ensemble is empty");
  const std::size_t n = base.front().labels.size();
  if (n == 0) throw MalformedEnsemble("base clustering has no points");

  IndicatorGraph G;
  G.n = n;
  G.m = static_cast<int>(base.size());
  G.block_offset.resize(base.size() + 1);
  G.block_offset[0] = 0;
  for (std::size_t b = 0; b < base.size(); ++b) {
    const LabelVector& l = base[b].labels;
    if (l.size() != n) throw MalformedEnsemble("base clustering length mismatch");
    if (l.c < 1) throw MalformedEnsemble("base clustering has no clusters");
    std::vector<std::int32_t> count(static_cast<std::size_t>(l.c), 0);
    for (auto v : l.labels) {
      if (v < 0 || v >= l.c) throw MalformedEnsemble("label outside [0,c)");
      ++count[static_cast<std::size_t>(v)];
    }
    for (auto cnt : count)
      if (cnt == 0) throw MalformedEnsemble("non-contiguous labels: empty cluster id");
    G.block_offset[b + 1] = G.block_offset[b] + l.c;
    G.cluster_owner.insert(G.cluster_owner.end(), static_cast<std::size_t>(l.c),
                           static_cast<std::int32_t>(b));
    G.col_size.insert(G.col_size.end(), count.begin(), count.end());
  }
  G.total_clusters = G.block_offset.back();

  G.cols.resize(n * base.size());
  for (std::size_t b = 0; b < base.size(); ++b) {
    const std::int32_t off = G.block_offset[b];
    const auto& labels = base[b].labels.labels;
    for (std::size_t i = 0; i < n; ++i) G.cols[i * base.size() + b] = off + labels[i];
  }
  return G;
}

IndicatorGraph build_indicator(const Ensemble& E) { return build_indicator(E.base); }

Embedding consensus_embedding(const IndicatorGraph& G, int c_tilde,
                              const SpectralOptions& opts) {
  if (c_tilde < 1 || c_tilde > G.total_clusters)
    throw ParamError("need 1 <= c_tilde <= total cluster count");
  BipartiteEdges E = edges_of(G);
  BipartiteDegrees deg = degrees(E);
  ReducedLaplacian red = reduced_laplacian(E, deg);

  int want = opts.keep_trivial ? c_tilde : c_tilde + 1;
  if (static_cast<std::size_t>(want) > red.size)
    throw ParamError("c_tilde exceeds surviving cluster columns");
  EigenPairs pairs = bottom_eigen(red, want);
  if (!opts.keep_trivial) {
    EigenPairs trimmed;
    trimmed.size = pairs.size;
    trimmed.c = static_cast<std::size_t>(c_tilde);
    trimmed.values.assign(pairs.values.begin() + 1, pairs.values.end());
    trimmed.vectors.resize(pairs.size * trimmed.c);
    for (std::size_t j = 0; j < pairs.size; ++j)
      std::copy_n(pairs.vectors.data() + j * pairs.c + 1, trimmed.c,
                  trimmed.vectors.data() + j * trimmed.c);
    pairs = std::move(trimmed);
  }
  return lift_embedding(E, deg, red.col_map, pairs, opts.row_normalize);
}

std::uint64_t consensus_kmeans_seed(std::uint64_t seed) {
  return derive_seed(seed, 0xCD);
}

LabelVector consensus_cluster(const Embedding& emb, int c_tilde, std::uint64_t seed) {
  if (c_tilde < 2) throw ParamError("consensus_cluster needs c_tilde >= 2");
  DataMatrix U;
  U.n = emb.n;
  U.d = emb.c;
  U.values = emb.vectors;
  return kmeans(U, c_tilde, seed).labels;
}

ConsensusResult run_lsec(const DataMatrix& X, EnsembleParams params, int c_tilde,
                         std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  params.seed = seed;
  params.validate(X.n);
  if (c_tilde < 2) throw ParamError("need c_tilde >= 2");

  ConsensusResult res;
  auto t0 = clock::now();
  res.ensemble = generate_ensemble(X, params);
  auto t1 = clock::now();

  IndicatorGraph G = build_indicator(res.ensemble);
  res.embedding = consensus_embedding(G, c_tilde);
  res.labels = consensus_cluster(res.embedding, c_tilde, consensus_kmeans_seed(seed));
  auto t2 = clock::now();

  res.timing.generation_s = std::chrono::duration<double>(t1 - t0).count();
  res.timing.consensus_s = std::chrono::duration<double>(t2 - t1).count();
  res.timing.total_s = std::chrono::duration<double>(t2 - t0).count();
  return res;
}

}  // namespace lsec
