#include "tgsketch/pipeline.hpp"

#include <algorithm>
#include <cstring>

#include "tgsketch/errors.hpp"

namespace tgsketch {

std::uint64_t stage_seed(std::uint64_t seed, const char* stage) {
  std::uint64_t tag = 0;
  std::memcpy(&tag, stage, std::min<std::size_t>(std::strlen(stage), 8));
  return derive_seed(seed, tag, 0x737461676555ULL);
}

void EmbedParams::validate() const {
  if (walks_per_edge < 1) throw validation_error("walks per edge must be >= 1");
  if (walk_length < 2) throw validation_error("walk length must be >= 2");
  if (max_distance < 1) throw validation_error("max temporal distance must be >= 1");
  if (sketch_bits < max_distance)
    throw validation_error("sketch width must be at least the number of distance segments");
  if (bins < 1) throw validation_error("bin count must be >= 1");
}

EmbedResult embed_graph(const TemporalGraph& g, const EmbedParams& params,
                        const AttributeTable* attrs) {
  params.validate();
  EmbedResult result;
  result.features = derive_structural_features(g);
  if (attrs && !attrs->empty()) result.features = attach_attributes(result.features, g, *attrs);
  result.bins = fit_log_bins(result.features, params.bins);

  const WalkPolicy policy = WalkPolicy::for_graph(g, params.mode);
  result.histograms = accumulate_streaming(
      g, result.features, result.bins, policy, params.walks_per_edge, params.walk_length,
      params.max_distance, stage_seed(params.seed, "walks"));

  const auto segment_bits = split_sketch_bits(params.sketch_bits, params.max_distance);
  result.planes =
      generate_hyperplanes(result.histograms.dim, segment_bits, stage_seed(params.seed, "planes"));
  result.sketches = assemble_embeddings(result.histograms, result.planes);
  return result;
}

namespace {

LabeledPairs benchmark_pairs(const ReplicaGroundTruth& truth, std::size_t num_nodes,
                             std::uint64_t seed) {
  rng_engine rng(stage_seed(seed, "negs"));
  auto negatives = sample_negatives(truth.pairs, num_nodes, truth.pairs.size(), rng);
  LabeledPairs all;
  for (auto p : truth.pairs) all.add(p, 1);
  for (auto p : negatives) all.add(p, 0);
  return all;
}

}  // namespace

SupervisedResult run_supervised_eval(const TemporalGraph& g, const SupervisedParams& params,
                                     const AttributeTable* attrs) {
  ReplicaInjection injection = inject_replicas(g, params.fraction, params.p1, params.p2,
                                               stage_seed(params.embed.seed, "replicas"));
  EmbedResult embedded = embed_graph(injection.graph, params.embed, attrs);

  LabeledPairs all = benchmark_pairs(injection.truth, injection.graph.num_nodes(),
                                     params.embed.seed);
  auto [train, test] = split_pairs(all, params.split_ratio, params.embed.seed);

  PairDataset train_data =
      build_pair_dataset(embedded.sketches, train.pairs, train.labels, /*both_orders=*/true);
  PairDataset test_data =
      build_pair_dataset(embedded.sketches, test.pairs, test.labels, /*both_orders=*/false);

  LogisticModel model = train_logistic(train_data, params.lambda, params.tol, params.max_iter);
  std::vector<double> scores = predict_scores(model, test_data);

  SupervisedResult result;
  result.metrics = compute_metrics(scores, test_data.labels);
  result.train_rows = train_data.rows;
  result.test_rows = test_data.rows;
  result.truth = std::move(injection.truth);
  return result;
}

UnsupervisedResult run_unsupervised_stitch(const TemporalGraph& g,
                                           const UnsupervisedParams& params,
                                           const AttributeTable* attrs) {
  ReplicaInjection injection = inject_replicas(g, params.fraction, params.p1, params.p2,
                                               stage_seed(params.embed.seed, "replicas"));
  EmbedResult embedded = embed_graph(injection.graph, params.embed, attrs);

  LabeledPairs all = benchmark_pairs(injection.truth, injection.graph.num_nodes(),
                                     params.embed.seed);
  BucketTable table = build_buckets(embedded.sketches, params.band_bits,
                                    stage_seed(params.embed.seed, "bands"));
  std::vector<int> decisions = stitch_unsupervised(table, all.pairs);
  std::vector<double> scores(decisions.begin(), decisions.end());

  UnsupervisedResult result;
  result.metrics = compute_metrics(scores, all.labels);
  result.metrics.auc_defined = false;  // binary decisions; AUC not reported
  result.candidates = candidate_pairs(table);
  result.labels = injection.graph.labels();
  result.truth = std::move(injection.truth);
  return result;
}

}  // namespace tgsketch
