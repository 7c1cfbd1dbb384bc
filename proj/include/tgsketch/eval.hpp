#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tgsketch/graph.hpp"
#include "tgsketch/rng.hpp"

namespace tgsketch {

struct ReplicaGroundTruth {
  std::vector<std::pair<node_id, node_id>> pairs;  // (original, replica)
  double fraction = 0.05;
  double p1 = 0.6;
  double p2 = 0.3;
  std::uint64_t seed = 0;
};

struct ReplicaInjection {
  TemporalGraph graph;  // perturbed graph; replicas appended after originals
  ReplicaGroundTruth truth;
};

// Samples fraction * N of the nodes with total degree strictly above the
// mean and splits each one's edges with its replica: every incident edge
// stays with probability p1 (else its endpoint moves to the replica), and is
// independently copied to the replica with probability p2. Replica labels
// are "<original>~rep".
ReplicaInjection inject_replicas(const TemporalGraph& g, double fraction, double p1, double p2,
                                 std::uint64_t seed);

// count unordered pairs drawn uniformly from [0, pool_size), distinct from
// each other, from the positives, and from self-pairs.
std::vector<std::pair<node_id, node_id>> sample_negatives(
    const std::vector<std::pair<node_id, node_id>>& positives, std::size_t pool_size,
    std::size_t count, rng_engine& rng);

struct LabeledPairs {
  std::vector<std::pair<node_id, node_id>> pairs;
  std::vector<int> labels;

  std::size_t size() const { return pairs.size(); }
  void add(std::pair<node_id, node_id> p, int label) {
    pairs.push_back(p);
    labels.push_back(label);
  }
};

// Stratified split; per class the two sides differ by at most one row.
std::pair<LabeledPairs, LabeledPairs> split_pairs(const LabeledPairs& all, double ratio,
                                                  std::uint64_t seed);

struct MetricReport {
  double auc = 0.0;
  double acc = 0.0;
  double f1 = 0.0;
  bool auc_defined = false;
  std::size_t positives = 0;
  std::size_t negatives = 0;
};

// AUC by rank statistic (ties count half); ACC and F1 of the positive class
// at the threshold.
MetricReport compute_metrics(const std::vector<double>& scores, const std::vector<int>& labels,
                             double threshold = 0.5);

// "label_u<TAB>label_u'" lines.
void write_ground_truth(const ReplicaGroundTruth& truth, const TemporalGraph& g,
                        std::ostream& out);

// "label_u<TAB>label_v<TAB>{0,1}" lines resolved against a label map.
LabeledPairs load_pair_file(std::istream& in,
                            const std::unordered_map<std::string, node_id>& ids);
std::unordered_map<std::string, node_id> label_index(const std::vector<std::string>& labels);

}  // namespace tgsketch
