#pragma once

#include "tgsketch/contexts.hpp"
#include "tgsketch/hashing.hpp"

namespace tgsketch::reference {

// Naive O(walks * L^2) pair enumeration through explicit context multisets,
// feature substitution, and per-slot aggregation. Serial. Kept as the oracle
// the parallel streaming accumulator is checked against.
HistogramMatrix histograms_from_corpus(const WalkCorpus& corpus, const FeatureMatrix& features,
                                       const BinningScheme& bins,
                                       const std::vector<type_id>& node_types,
                                       std::size_t num_types, int max_distance);

// Full serial pipeline: materialized corpus, naive histograms, per-node
// hashing. Same output as the parallel path for one seed.
SketchMatrix embed_serial(const TemporalGraph& g, const FeatureMatrix& features,
                          const BinningScheme& bins, const WalkPolicy& policy,
                          int walks_per_edge, int max_length, int max_distance,
                          const HyperplaneSet& planes, std::uint64_t seed);

}  // namespace tgsketch::reference
