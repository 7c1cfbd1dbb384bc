#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "tgsketch/features.hpp"
#include "tgsketch/graph.hpp"
#include "tgsketch/walks.hpp"

namespace tgsketch {

// Explicit per-node context multisets. Only used on small inputs and in
// tests; the production path streams walks straight into histograms.
struct ContextStore {
  std::size_t num_nodes = 0;
  int max_distance = 0;
  // slot (u, dt): member node -> multiplicity
  std::vector<std::map<node_id, std::uint32_t>> slots;

  const std::map<node_id, std::uint32_t>& at(node_id u, int dt) const {
    return slots[u * max_distance + (dt - 1)];
  }
  std::map<node_id, std::uint32_t>& at(node_id u, int dt) {
    return slots[u * max_distance + (dt - 1)];
  }
};

// For every ordered position pair (i, j) in a walk with |i - j| = dt <= MAX,
// the node at j joins the context of the node at i.
ContextStore extract_contexts(const WalkCorpus& corpus, int max_distance,
                              std::size_t num_nodes);

// Contexts with node IDs replaced by feature rows; the member's node type is
// kept for type-conditioned aggregation.
struct FeatureContextStore {
  struct Member {
    std::vector<double> values;  // one value per feature
    type_id type = 0;
    std::uint32_t count = 0;
  };
  std::size_t num_nodes = 0;
  int max_distance = 0;
  std::size_t num_features = 0;
  std::vector<std::vector<Member>> slots;

  const std::vector<Member>& at(node_id u, int dt) const {
    return slots[u * max_distance + (dt - 1)];
  }
};

FeatureContextStore substitute_features(const ContextStore& store, const FeatureMatrix& features,
                                        const std::vector<type_id>& node_types);

// Counts laid out as (node type p, feature j) blocks of b bins each, feature
// varying fastest within a type block.
struct ContextHistogram {
  node_id owner = 0;
  int distance = 0;
  std::vector<std::uint32_t> counts;
};

inline std::size_t histogram_slot(std::size_t feature, type_id type, int bin,
                                  std::size_t num_features, int bin_count) {
  return (static_cast<std::size_t>(type) * num_features + feature) *
             static_cast<std::size_t>(bin_count) +
         static_cast<std::size_t>(bin);
}

ContextHistogram aggregate_histogram(node_id u, int dt, const FeatureContextStore& store,
                                     const BinningScheme& bins, std::size_t num_types);

// All per-(node, distance) histograms in one flat integer matrix.
struct HistogramMatrix {
  std::size_t num_nodes = 0;
  int max_distance = 0;
  std::size_t dim = 0;  // |F| * |T_V| * b
  std::vector<std::uint32_t> counts;

  std::span<const std::uint32_t> row(node_id u, int dt) const {
    return {counts.data() + (static_cast<std::size_t>(u) * max_distance + (dt - 1)) * dim, dim};
  }
  std::span<std::uint32_t> row(node_id u, int dt) {
    return {counts.data() + (static_cast<std::size_t>(u) * max_distance + (dt - 1)) * dim, dim};
  }

  bool operator==(const HistogramMatrix&) const = default;
};

// Streaming accumulation over an existing corpus: each in-walk pair is added
// straight into the owner's histogram. Parallel over walks; counts are
// atomically incremented, so the result is thread-count independent.
HistogramMatrix accumulate_histograms(const WalkCorpus& corpus, const FeatureMatrix& features,
                                      const BinningScheme& bins,
                                      const std::vector<type_id>& node_types,
                                      std::size_t num_types, int max_distance);

// Fused production path: walks are sampled and folded into histograms on the
// fly, never materialized. Identical output to generate_walk_corpus +
// accumulate_histograms for the same seed.
HistogramMatrix accumulate_streaming(const TemporalGraph& g, const FeatureMatrix& features,
                                     const BinningScheme& bins, const WalkPolicy& policy,
                                     int walks_per_edge, int max_length, int max_distance,
                                     std::uint64_t seed);

// CSV rows "label,dt,c0 c1 ..." for debugging.
void dump_histograms_csv(const HistogramMatrix& hists, const TemporalGraph& g,
                         std::ostream& out);

}  // namespace tgsketch
