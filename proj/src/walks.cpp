#include "tgsketch/walks.hpp"

#include <algorithm>
#include <cmath>

#include "tgsketch/errors.hpp"

namespace tgsketch {

namespace {
constexpr std::uint64_t kWalkSalt = 0x77616c6bULL;  // "walk"
}

std::string walk_mode_name(WalkMode mode) {
  switch (mode) {
    case WalkMode::short_term: return "short";
    case WalkMode::long_term: return "long";
    case WalkMode::static_mode: return "static";
  }
  return "static";
}

WalkMode parse_walk_mode(const std::string& name) {
  if (name == "short") return WalkMode::short_term;
  if (name == "long") return WalkMode::long_term;
  if (name == "static") return WalkMode::static_mode;
  throw validation_error("unknown walk policy '" + name + "' (expected short|long|static)");
}

WalkPolicy WalkPolicy::for_graph(const TemporalGraph& g, WalkMode mode) {
  WalkPolicy p;
  p.mode = mode;
  if (mode != WalkMode::static_mode) {
    if (!g.temporal())
      throw validation_error("policy '" + walk_mode_name(mode) +
                             "' requires a temporal graph (timestamp column)");
    p.origin = g.min_ts();
    timestamp_t span = g.duration();
    p.duration = span > 0 ? static_cast<double>(span) : 1.0;
  }
  return p;
}

TransitionIndex::TransitionIndex(const TemporalGraph& g, const WalkPolicy& policy)
    : g_(&g), policy_(policy) {
  const std::size_t n = g.num_nodes();
  offsets_.assign(n + 1, 0);
  for (node_id u = 0; u < n; ++u) offsets_[u + 1] = offsets_[u] + g.adjacency(u).size() + 1;
  cum_.assign(offsets_[n], 0.0);

  for (node_id u = 0; u < n; ++u) {
    auto adj = g.adjacency(u);
    double* cum = cum_.data() + offsets_[u];
    const std::size_t deg = adj.size();
    if (policy.temporal()) {
      // Shifted timestamps keep the exponent in [-1, 1].
      cum[deg] = 0.0;
      for (std::size_t i = deg; i-- > 0;) {
        double arg = static_cast<double>(adj[i].ts - policy.origin) / policy.duration;
        double w = std::exp(policy.mode == WalkMode::short_term ? -arg : arg);
        cum[i] = cum[i + 1] + w;
      }
    } else {
      cum[0] = 0.0;
      for (std::size_t i = 0; i < deg; ++i) cum[i + 1] = cum[i] + adj[i].weight;
    }
  }
}

const AdjEntry* TransitionIndex::sample(node_id u, timestamp_t t_min, rng_engine& rng) const {
  auto adj = g_->adjacency(u);
  const std::size_t deg = adj.size();
  if (deg == 0) return nullptr;
  const double* cum = cum_.data() + offsets_[u];

  if (policy_.temporal()) {
    std::size_t lo = std::lower_bound(adj.begin(), adj.end(), t_min,
                                      [](const AdjEntry& e, timestamp_t t) { return e.ts < t; }) -
                     adj.begin();
    if (lo == deg) return nullptr;
    const double total = cum[lo];
    double target = total - uniform01(rng) * total;  // in (0, total]
    if (!(target > 0.0)) target = total;
    // First k in (lo, deg] with suffix[k] < target; suffix[deg] = 0 ends it.
    std::size_t a = lo + 1, b = deg;
    while (a < b) {
      std::size_t mid = (a + b) / 2;
      if (cum[mid] < target)
        b = mid;
      else
        a = mid + 1;
    }
    return &adj[a - 1];
  }

  const double total = cum[deg];
  double x = uniform01(rng) * total;
  std::size_t i = std::upper_bound(cum + 1, cum + deg + 1, x) - (cum + 1);
  if (i >= deg) i = deg - 1;
  return &adj[i];
}

std::vector<double> transition_distribution(const TemporalGraph& g, node_id u,
                                            timestamp_t t_prev, const WalkPolicy& policy) {
  if (!policy.temporal())
    throw validation_error("transition_distribution requires a temporal policy");
  auto nb = g.temporal_neighbors(u, t_prev);
  std::vector<double> probs(nb.entries.size());
  if (probs.empty()) return probs;
  double sum = 0.0;
  for (std::size_t i = 0; i < nb.entries.size(); ++i) {
    double arg = static_cast<double>(nb.entries[i].ts - policy.origin) / policy.duration;
    probs[i] = std::exp(policy.mode == WalkMode::short_term ? -arg : arg);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  return probs;
}

namespace {

void sample_walk_into(const TransitionIndex& index, const Edge& start, int max_length,
                      rng_engine& rng, Walk& w) {
  const bool temporal = index.policy().temporal();
  w.nodes.clear();
  w.times.clear();
  w.nodes.push_back(start.src);
  w.nodes.push_back(start.dst);
  node_id cur = start.dst;
  timestamp_t t_prev = start.ts;
  if (temporal) w.times.push_back(start.ts);
  while (w.nodes.size() < static_cast<std::size_t>(max_length)) {
    const AdjEntry* next = index.sample(cur, temporal ? t_prev : min_timestamp, rng);
    if (!next) break;
    w.nodes.push_back(next->neighbor);
    if (temporal) {
      w.times.push_back(next->ts);
      t_prev = next->ts;
    }
    cur = next->neighbor;
  }
}

}  // namespace

Walk sample_temporal_walk(const TransitionIndex& index, const Edge& start, int max_length,
                          rng_engine& rng) {
  Walk w;
  sample_walk_into(index, start, max_length, rng, w);
  return w;
}

void sample_task_walk(const TransitionIndex& index, std::size_t edge_index, int rep,
                      int walks_per_edge, int max_length, std::uint64_t seed, Walk& out) {
  const std::uint64_t task = edge_index * static_cast<std::uint64_t>(walks_per_edge) + rep;
  rng_engine rng(derive_seed(seed, task, kWalkSalt));
  sample_walk_into(index, index.graph().edge(edge_index), max_length, rng, out);
}

WalkCorpus generate_walk_corpus(const TemporalGraph& g, int walks_per_edge, int max_length,
                                const WalkPolicy& policy, std::uint64_t seed) {
  if (walks_per_edge < 1) throw validation_error("walks per edge must be >= 1");
  if (max_length < 2) throw validation_error("walk length must be >= 2");

  WalkCorpus corpus;
  corpus.walks_per_edge = walks_per_edge;
  corpus.max_length = max_length;
  corpus.mode = policy.mode;
  corpus.seed = seed;

  const std::size_t m = g.num_edges();
  const std::size_t total = m * static_cast<std::size_t>(walks_per_edge);
  corpus.walks.resize(total);
  TransitionIndex index(g, policy);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(total); ++t) {
    const std::size_t e = static_cast<std::size_t>(t) / walks_per_edge;
    const int rep = static_cast<int>(static_cast<std::size_t>(t) % walks_per_edge);
    sample_task_walk(index, e, rep, walks_per_edge, max_length, seed, corpus.walks[t]);
  }
  return corpus;
}

}  // namespace tgsketch
