#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgsketch/graph.hpp"
#include "tgsketch/rng.hpp"
#include "tgsketch/types.hpp"

namespace tgsketch {

enum class WalkMode { short_term, long_term, static_mode };

std::string walk_mode_name(WalkMode mode);
WalkMode parse_walk_mode(const std::string& name);

struct WalkPolicy {
  WalkMode mode = WalkMode::static_mode;
  // Total timestamp span of the graph; 1 substituted when the graph has a
  // single distinct timestamp so the softmax arguments stay defined.
  double duration = 1.0;
  timestamp_t origin = 0;  // min edge timestamp, shifts softmax arguments into [0, 1]

  bool temporal() const { return mode != WalkMode::static_mode; }

  static WalkPolicy for_graph(const TemporalGraph& g, WalkMode mode);
};

struct Walk {
  std::vector<node_id> nodes;
  std::vector<timestamp_t> times;  // traversed edge timestamps; empty in static mode

  std::size_t length() const { return nodes.size(); }
};

struct WalkCorpus {
  std::vector<Walk> walks;
  int walks_per_edge = 0;
  int max_length = 0;
  WalkMode mode = WalkMode::static_mode;
  std::uint64_t seed = 0;
};

// Precomputed per-node cumulative transition weights. Sampling a step is a
// binary search, so hub nodes do not make walks quadratic.
class TransitionIndex {
 public:
  TransitionIndex(const TemporalGraph& g, const WalkPolicy& policy);

  // Next hop from u over entries with ts >= t_min (ignored in static mode);
  // nullptr at a dead end.
  const AdjEntry* sample(node_id u, timestamp_t t_min, rng_engine& rng) const;

  const WalkPolicy& policy() const { return policy_; }
  const TemporalGraph& graph() const { return *g_; }

 private:
  const TemporalGraph* g_;
  WalkPolicy policy_;
  std::vector<std::size_t> offsets_;  // node -> start into cum_ (deg+1 slots per node)
  std::vector<double> cum_;           // temporal: suffix sums; static: prefix sums
};

// Exact transition probabilities over temporal_neighbors(u, t_prev), in
// neighborhood order. Empty vector when the neighborhood is empty (walk
// termination, not an error).
std::vector<double> transition_distribution(const TemporalGraph& g, node_id u,
                                            timestamp_t t_prev, const WalkPolicy& policy);

// Walk of up to L nodes starting with the given edge's endpoints. Temporal
// modes keep traversed timestamps non-decreasing and may stop early.
Walk sample_temporal_walk(const TransitionIndex& index, const Edge& start, int max_length,
                          rng_engine& rng);

// The walk that corpus generation produces for (edge_index, rep); shared by
// the materialized corpus and the streaming accumulator so both see
// identical walks for one seed.
void sample_task_walk(const TransitionIndex& index, std::size_t edge_index, int rep,
                      int walks_per_edge, int max_length, std::uint64_t seed, Walk& out);

// R walks per edge; walk (e, rep) lands at index e * R + rep regardless of
// thread count.
WalkCorpus generate_walk_corpus(const TemporalGraph& g, int walks_per_edge, int max_length,
                                const WalkPolicy& policy, std::uint64_t seed);

}  // namespace tgsketch
