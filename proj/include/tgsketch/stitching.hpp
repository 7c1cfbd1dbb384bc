#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tgsketch/hashing.hpp"

namespace tgsketch {

// Pair rows: concat(z_u, z_v) as 0/1 reals plus a binary label.
struct PairDataset {
  std::size_t feature_dim = 0;
  std::size_t rows = 0;
  std::vector<double> features;  // row-major
  std::vector<int> labels;

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }
  void add_row(std::span<const double> x, int label);
};

// both_orders doubles each pair as (u,v) and (v,u); used for training since
// concatenation is order sensitive.
PairDataset build_pair_dataset(const SketchMatrix& z,
                               const std::vector<std::pair<node_id, node_id>>& pairs,
                               const std::vector<int>& labels, bool both_orders);

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  double lambda = 1.0;  // inverse regularization strength
  double tol = 1e-4;
  bool trained = false;
  int iterations = 0;

  double score(std::span<const double> x) const;
};

// Mean logistic loss + ||w||^2 / (2 * lambda * n); gradient output is
// d(objective)/d(weights ++ bias). Exposed for the finite-difference check.
double logistic_objective(const PairDataset& data, std::span<const double> weights, double bias,
                          double lambda, std::vector<double>* grad);

// Full-batch gradient descent with backtracking line search. Stops when the
// largest absolute gradient component drops below tol.
LogisticModel train_logistic(const PairDataset& data, double lambda = 1.0, double tol = 1e-4,
                             int max_iter = 1000);

std::vector<double> predict_scores(const LogisticModel& model, const PairDataset& data);
std::vector<int> predict_labels(const std::vector<double>& scores, double threshold = 0.5);

// LSH banding over the per-distance sketch segments: one band per distance,
// AND over band_bits sampled positions inside the band, OR across bands.
struct BucketTable {
  int band_bits = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> positions;      // per band: sampled bit positions
  std::vector<std::vector<std::string>> sigs;   // per band: node -> signature
  std::vector<std::unordered_map<std::string, std::vector<node_id>>> buckets;

  std::size_t num_nodes() const { return sigs.empty() ? 0 : sigs[0].size(); }
};

BucketTable build_buckets(const SketchMatrix& z, int band_bits, std::uint64_t seed);

bool co_bucketed(const BucketTable& table, node_id u, node_id v);

// 1 for each query pair sharing at least one bucket.
std::vector<int> stitch_unsupervised(const BucketTable& table,
                                     const std::vector<std::pair<node_id, node_id>>& queries);

// All distinct co-bucketed pairs (u < v), sorted.
std::vector<std::pair<node_id, node_id>> candidate_pairs(const BucketTable& table);

}  // namespace tgsketch
