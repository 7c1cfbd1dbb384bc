#pragma once

#include <cstdint>
#include <optional>

#include "tgsketch/eval.hpp"
#include "tgsketch/hashing.hpp"
#include "tgsketch/stitching.hpp"

namespace tgsketch {

struct EmbedParams {
  int walks_per_edge = 10;  // R
  int walk_length = 20;     // L
  int max_distance = 3;     // MAX
  int sketch_bits = 128;    // K
  int bins = 5;             // b
  WalkMode mode = WalkMode::short_term;
  std::uint64_t seed = 1;

  void validate() const;
};

struct EmbedResult {
  FeatureMatrix features;
  BinningScheme bins;
  HistogramMatrix histograms;
  HyperplaneSet planes;
  SketchMatrix sketches;
};

// graph -> features -> walks -> histograms -> sketches. Walks stream into
// histograms without being materialized.
EmbedResult embed_graph(const TemporalGraph& g, const EmbedParams& params,
                        const AttributeTable* attrs = nullptr);

struct SupervisedParams {
  EmbedParams embed;
  double fraction = 0.05;
  double p1 = 0.6;
  double p2 = 0.3;
  double lambda = 1.0;
  double tol = 1e-4;
  int max_iter = 1000;
  double split_ratio = 0.5;
};

struct SupervisedResult {
  MetricReport metrics;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
  ReplicaGroundTruth truth;
};

// Replica benchmark end to end: inject, embed the perturbed graph, sample
// negatives, split, train logistic regression, score the held-out pairs.
SupervisedResult run_supervised_eval(const TemporalGraph& g, const SupervisedParams& params,
                                     const AttributeTable* attrs = nullptr);

struct UnsupervisedParams {
  EmbedParams embed;
  double fraction = 0.05;
  double p1 = 0.6;
  double p2 = 0.3;
  int band_bits = 16;
};

struct UnsupervisedResult {
  MetricReport metrics;  // ACC and F1 only; decisions are binary
  std::vector<std::pair<node_id, node_id>> candidates;
  std::vector<std::string> labels;  // of the perturbed graph
  ReplicaGroundTruth truth;
};

// Same benchmark with banding instead of a classifier: a pair is stitched
// iff the two nodes share a bucket in at least one band.
UnsupervisedResult run_unsupervised_stitch(const TemporalGraph& g,
                                           const UnsupervisedParams& params,
                                           const AttributeTable* attrs = nullptr);

// Sub-seed derivation shared by the CLI and the benchmark wrappers, so one
// user seed pins every random stage.
std::uint64_t stage_seed(std::uint64_t seed, const char* stage);

}  // namespace tgsketch
