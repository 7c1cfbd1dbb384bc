#include "tgsketch/contexts.hpp"

#include <ostream>

#include "tgsketch/errors.hpp"

namespace tgsketch {

ContextStore extract_contexts(const WalkCorpus& corpus, int max_distance,
                              std::size_t num_nodes) {
  if (max_distance < 1) throw validation_error("max temporal distance must be >= 1");
  ContextStore store;
  store.num_nodes = num_nodes;
  store.max_distance = max_distance;
  store.slots.resize(num_nodes * static_cast<std::size_t>(max_distance));
  for (const Walk& w : corpus.walks) {
    const std::size_t len = w.nodes.size();
    for (std::size_t i = 0; i < len; ++i) {
      for (int dt = 1; dt <= max_distance; ++dt) {
        if (i >= static_cast<std::size_t>(dt)) store.at(w.nodes[i], dt)[w.nodes[i - dt]]++;
        if (i + dt < len) store.at(w.nodes[i], dt)[w.nodes[i + dt]]++;
      }
    }
  }
  return store;
}

FeatureContextStore substitute_features(const ContextStore& store, const FeatureMatrix& features,
                                        const std::vector<type_id>& node_types) {
  FeatureContextStore out;
  out.num_nodes = store.num_nodes;
  out.max_distance = store.max_distance;
  out.num_features = features.cols;
  out.slots.resize(store.slots.size());
  for (std::size_t s = 0; s < store.slots.size(); ++s) {
    for (const auto& [v, count] : store.slots[s]) {
      FeatureContextStore::Member m;
      m.type = node_types[v];
      m.count = count;
      m.values.resize(features.cols);
      for (std::size_t j = 0; j < features.cols; ++j) m.values[j] = features.at(v, j);
      out.slots[s].push_back(std::move(m));
    }
  }
  return out;
}

ContextHistogram aggregate_histogram(node_id u, int dt, const FeatureContextStore& store,
                                     const BinningScheme& bins, std::size_t num_types) {
  ContextHistogram h;
  h.owner = u;
  h.distance = dt;
  h.counts.assign(bins.histogram_dim(num_types), 0);
  for (const auto& member : store.at(u, dt)) {
    for (std::size_t j = 0; j < store.num_features; ++j) {
      int bin = bins.bin_of(j, member.values[j]);
      h.counts[histogram_slot(j, member.type, bin, store.num_features, bins.bin_count)] +=
          member.count;
    }
  }
  return h;
}

namespace {

// Per-node bin indices, precomputed so the hot pair loop is table lookups.
std::vector<std::uint16_t> bin_table(const FeatureMatrix& features, const BinningScheme& bins) {
  std::vector<std::uint16_t> table(features.rows * features.cols);
  for (std::size_t u = 0; u < features.rows; ++u)
    for (std::size_t j = 0; j < features.cols; ++j)
      table[u * features.cols + j] =
          static_cast<std::uint16_t>(bins.bin_of(j, features.at(static_cast<node_id>(u), j)));
  return table;
}

struct AccumulatorLayout {
  std::size_t num_features = 0;
  std::size_t dim = 0;
  int bin_count = 0;
};

// Adds every (owner, member) pair of one walk into the matrix.
inline void add_walk(const Walk& w, int max_distance, const std::vector<std::uint16_t>& node_bins,
                     const std::vector<type_id>& node_types, const AccumulatorLayout& layout,
                     HistogramMatrix& hists) {
  const std::size_t len = w.nodes.size();
  const std::size_t f = layout.num_features;
  const std::size_t b = static_cast<std::size_t>(layout.bin_count);
  for (std::size_t i = 0; i < len; ++i) {
    const node_id owner = w.nodes[i];
    std::uint32_t* base =
        hists.counts.data() + static_cast<std::size_t>(owner) * max_distance * layout.dim;
    for (int dt = 1; dt <= max_distance; ++dt) {
      std::uint32_t* row = base + (dt - 1) * layout.dim;
      for (int dir = 0; dir < 2; ++dir) {
        std::size_t j;
        if (dir == 0) {
          if (i < static_cast<std::size_t>(dt)) continue;
          j = i - dt;
        } else {
          j = i + dt;
          if (j >= len) continue;
        }
        const node_id member = w.nodes[j];
        const std::uint16_t* member_bins = node_bins.data() + member * f;
        const std::size_t type_block = static_cast<std::size_t>(node_types[member]) * f;
        for (std::size_t feat = 0; feat < f; ++feat) {
          std::uint32_t& slot = row[(type_block + feat) * b + member_bins[feat]];
#pragma omp atomic update
          slot++;
        }
      }
    }
  }
}

}  // namespace

HistogramMatrix accumulate_histograms(const WalkCorpus& corpus, const FeatureMatrix& features,
                                      const BinningScheme& bins,
                                      const std::vector<type_id>& node_types,
                                      std::size_t num_types, int max_distance) {
  HistogramMatrix hists;
  hists.num_nodes = features.rows;
  hists.max_distance = max_distance;
  hists.dim = bins.histogram_dim(num_types);
  hists.counts.assign(hists.num_nodes * max_distance * hists.dim, 0);

  const auto node_bins = bin_table(features, bins);
  const AccumulatorLayout layout{features.cols, hists.dim, bins.bin_count};

#pragma omp parallel for schedule(dynamic, 512)
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(corpus.walks.size()); ++t)
    add_walk(corpus.walks[t], max_distance, node_bins, node_types, layout, hists);
  return hists;
}

HistogramMatrix accumulate_streaming(const TemporalGraph& g, const FeatureMatrix& features,
                                     const BinningScheme& bins, const WalkPolicy& policy,
                                     int walks_per_edge, int max_length, int max_distance,
                                     std::uint64_t seed) {
  if (walks_per_edge < 1) throw validation_error("walks per edge must be >= 1");
  if (max_length < 2) throw validation_error("walk length must be >= 2");
  if (max_distance < 1) throw validation_error("max temporal distance must be >= 1");

  HistogramMatrix hists;
  hists.num_nodes = g.num_nodes();
  hists.max_distance = max_distance;
  hists.dim = bins.histogram_dim(g.num_node_types());
  hists.counts.assign(hists.num_nodes * max_distance * hists.dim, 0);

  const auto node_bins = bin_table(features, bins);
  const AccumulatorLayout layout{features.cols, hists.dim, bins.bin_count};
  const TransitionIndex index(g, policy);
  const std::size_t total = g.num_edges() * static_cast<std::size_t>(walks_per_edge);

#pragma omp parallel
  {
    Walk walk;  // reused per task
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(total); ++t) {
      const std::size_t e = static_cast<std::size_t>(t) / walks_per_edge;
      const int rep = static_cast<int>(static_cast<std::size_t>(t) % walks_per_edge);
      sample_task_walk(index, e, rep, walks_per_edge, max_length, seed, walk);
      add_walk(walk, max_distance, node_bins, g.node_types(), layout, hists);
    }
  }
  return hists;
}

void dump_histograms_csv(const HistogramMatrix& hists, const TemporalGraph& g,
                         std::ostream& out) {
  for (node_id u = 0; u < hists.num_nodes; ++u) {
    for (int dt = 1; dt <= hists.max_distance; ++dt) {
      out << g.label(u) << ',' << dt << ',';
      auto row = hists.row(u, dt);
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ' ';
        out << row[i];
      }
      out << '\n';
    }
  }
}

}  // namespace tgsketch
