#include "tgsketch/reference.hpp"

#include <algorithm>

namespace tgsketch::reference {

HistogramMatrix histograms_from_corpus(const WalkCorpus& corpus, const FeatureMatrix& features,
                                       const BinningScheme& bins,
                                       const std::vector<type_id>& node_types,
                                       std::size_t num_types, int max_distance) {
  const ContextStore store = extract_contexts(corpus, max_distance, features.rows);
  const FeatureContextStore fstore = substitute_features(store, features, node_types);

  HistogramMatrix hists;
  hists.num_nodes = features.rows;
  hists.max_distance = max_distance;
  hists.dim = bins.histogram_dim(num_types);
  hists.counts.assign(hists.num_nodes * max_distance * hists.dim, 0);
  for (node_id u = 0; u < hists.num_nodes; ++u) {
    for (int dt = 1; dt <= max_distance; ++dt) {
      ContextHistogram h = aggregate_histogram(u, dt, fstore, bins, num_types);
      auto row = hists.row(u, dt);
      std::copy(h.counts.begin(), h.counts.end(), row.begin());
    }
  }
  return hists;
}

SketchMatrix embed_serial(const TemporalGraph& g, const FeatureMatrix& features,
                          const BinningScheme& bins, const WalkPolicy& policy,
                          int walks_per_edge, int max_length, int max_distance,
                          const HyperplaneSet& planes, std::uint64_t seed) {
  const TransitionIndex index(g, policy);
  WalkCorpus corpus;
  corpus.walks_per_edge = walks_per_edge;
  corpus.max_length = max_length;
  corpus.mode = policy.mode;
  corpus.seed = seed;
  corpus.walks.resize(g.num_edges() * static_cast<std::size_t>(walks_per_edge));
  for (std::size_t e = 0; e < g.num_edges(); ++e)
    for (int rep = 0; rep < walks_per_edge; ++rep)
      sample_task_walk(index, e, rep, walks_per_edge, max_length, seed,
                       corpus.walks[e * walks_per_edge + rep]);

  const HistogramMatrix hists = histograms_from_corpus(
      corpus, features, bins, g.node_types(), g.num_node_types(), max_distance);

  SketchMatrix z(hists.num_nodes, planes.segment_bits);
  for (node_id u = 0; u < hists.num_nodes; ++u) {
    int offset = 0;
    for (int dt = 1; dt <= max_distance; ++dt) {
      const int k_dt = planes.segment_bits[dt - 1];
      auto bits = simhash(hists.row(u, dt), planes.segments[dt - 1], k_dt);
      for (int i = 0; i < k_dt; ++i)
        if (bits[i]) z.set(u, offset + i, true);
      offset += k_dt;
    }
  }
  return z;
}

}  // namespace tgsketch::reference
