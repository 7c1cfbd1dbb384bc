#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "tgsketch/graph.hpp"
#include "tgsketch/rng.hpp"

namespace tgsketch::testing {

inline TemporalGraph graph_from_text(const std::string& edges,
                                     const std::string& schema = "src dst timestamp",
                                     bool directed = false, const std::string& types = "") {
  LoadOptions opt;
  opt.schema = EdgeListSchema::parse(schema);
  opt.directed = directed;
  std::istringstream in(edges);
  if (types.empty()) return load_edge_list(in, opt);
  std::istringstream types_in(types);
  NodeTypeTable table = load_node_types(types_in);
  return load_edge_list(in, opt, &table);
}

// Uniform random directed/undirected temporal multigraph.
inline TemporalGraph random_temporal_graph(std::size_t nodes, std::size_t edges, bool directed,
                                           std::uint64_t seed, std::int64_t max_ts = 1000000) {
  rng_engine rng(seed);
  GraphBuilder builder(directed, /*temporal=*/true);
  for (std::size_t u = 0; u < nodes; ++u) builder.add_node("n" + std::to_string(u));
  for (std::size_t i = 0; i < edges; ++i) {
    auto u = static_cast<node_id>(uniform_index(rng, nodes));
    auto v = static_cast<node_id>(uniform_index(rng, nodes));
    auto ts = static_cast<timestamp_t>(uniform_index(rng, max_ts));
    builder.add_edge(u, v, ts, 1.0, 0);
  }
  return builder.finalize();
}

// Directed temporal graph shaped like a who-trusts-whom network: Chung-Lu
// edges over a power-law weight sequence (a few hundred-degree hubs, a
// low-degree majority), timestamps spread over a long window.
inline TemporalGraph synthetic_trust_graph(std::size_t nodes, std::size_t edges,
                                           std::uint64_t seed, double exponent = 0.8) {
  rng_engine rng(seed);
  GraphBuilder builder(/*directed=*/true, /*temporal=*/true);
  for (std::size_t u = 0; u < nodes; ++u) builder.add_node("u" + std::to_string(u));
  std::vector<double> cum(nodes + 1, 0.0);
  for (std::size_t u = 0; u < nodes; ++u)
    cum[u + 1] = cum[u] + std::pow(static_cast<double>(u + 1), -exponent);
  auto draw = [&]() {
    const double x = uniform01(rng) * cum[nodes];
    const std::size_t i = std::upper_bound(cum.begin() + 1, cum.end(), x) - (cum.begin() + 1);
    return static_cast<node_id>(std::min(i, nodes - 1));
  };
  for (std::size_t i = 0; i < edges; ++i) {
    node_id src = draw();
    node_id dst = draw();
    while (dst == src) dst = draw();
    auto ts = static_cast<timestamp_t>(uniform_index(rng, 100000000));
    builder.add_edge(src, dst, ts, 1.0, 0);
  }
  return builder.finalize();
}

// Undirected, weighted, static bipartite graph shaped like an author-paper
// collaboration network: papers draw 1-3 authors from a power-law author
// weight sequence (a few prolific authors, a long degree-1 tail).
inline TemporalGraph synthetic_collaboration_graph(std::size_t authors, std::size_t papers,
                                                   std::size_t edges, std::uint64_t seed,
                                                   double exponent = 1.1) {
  rng_engine rng(seed);
  GraphBuilder builder(/*directed=*/false, /*temporal=*/false);
  builder.mark_weights();
  std::vector<node_id> author_ids(authors), paper_ids(papers);
  for (std::size_t a = 0; a < authors; ++a) {
    author_ids[a] = builder.add_node("a" + std::to_string(a));
    builder.set_node_type(author_ids[a], "author");
  }
  for (std::size_t p = 0; p < papers; ++p) {
    paper_ids[p] = builder.add_node("p" + std::to_string(p));
    builder.set_node_type(paper_ids[p], "paper");
  }
  auto powerlaw_cum = [&](std::size_t n) {
    std::vector<double> cum(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      cum[i + 1] = cum[i] + std::pow(static_cast<double>(i + 1), -exponent);
    return cum;
  };
  const auto author_cum = powerlaw_cum(authors);
  const auto paper_cum = powerlaw_cum(papers);
  auto draw = [&](const std::vector<double>& cum, std::size_t n) {
    const double x = uniform01(rng) * cum[n];
    const std::size_t i = std::upper_bound(cum.begin() + 1, cum.end(), x) - (cum.begin() + 1);
    return std::min(i, n - 1);
  };
  std::size_t added = 0;
  while (added < edges) {
    node_id p = paper_ids[draw(paper_cum, papers)];
    const std::size_t coauthors = 1 + uniform_index(rng, 3);
    for (std::size_t i = 0; i < coauthors && added < edges; ++i) {
      const double weight = 1.0 + static_cast<double>(uniform_index(rng, 3));
      builder.add_edge(author_ids[draw(author_cum, authors)], p, 0, weight, 0);
      ++added;
    }
  }
  return builder.finalize();
}

}  // namespace tgsketch::testing
