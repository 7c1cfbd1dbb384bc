#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgsketch/types.hpp"

namespace tgsketch {

struct Edge {
  node_id src = 0;
  node_id dst = 0;
  timestamp_t ts = 0;
  double weight = 1.0;
  type_id etype = 0;
};

// One traversable incidence of a node: the far endpoint of an edge plus the
// edge's timestamp and weight. For directed graphs only out-edges appear.
struct AdjEntry {
  node_id neighbor = 0;
  timestamp_t ts = 0;
  double weight = 1.0;
  std::uint32_t edge_index = 0;
};

struct DegreeProfile {
  std::uint64_t total = 0;
  std::uint64_t in = 0;
  std::uint64_t out = 0;
};

struct TemporalNeighborhood {
  node_id origin = 0;
  timestamp_t t_min = min_timestamp;
  std::vector<AdjEntry> entries;
};

// Continuous-time dynamic heterogeneous multigraph. Immutable after load;
// concurrent reads are safe.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  std::size_t num_nodes() const { return labels_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  bool directed() const { return directed_; }
  bool temporal() const { return temporal_; }
  bool has_weights() const { return has_weights_; }
  bool has_edge_types() const { return has_edge_types_; }

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  type_id node_type(node_id u) const { return node_types_[u]; }
  const std::vector<type_id>& node_types() const { return node_types_; }
  std::size_t num_node_types() const { return type_names_.empty() ? 1 : type_names_.size(); }
  std::size_t num_edge_types() const { return num_edge_types_; }
  const std::vector<std::string>& type_names() const { return type_names_; }

  const std::string& label(node_id u) const { return labels_[u]; }
  const std::vector<std::string>& labels() const { return labels_; }
  // Returns the dense id for a label, or throws std::out_of_range.
  node_id id_of(const std::string& label) const;
  bool has_label(const std::string& label) const { return label_ids_.count(label) != 0; }

  // Adjacency of u sorted by ascending timestamp (stable on edge order for
  // ties). Out-edges only when directed; both incidences when undirected.
  std::span<const AdjEntry> adjacency(node_id u) const;

  DegreeProfile degree_profile(node_id u) const;

  // Entries of u's adjacency with timestamp >= t_min. For non-temporal
  // graphs t_min is ignored and the full neighborhood is returned.
  TemporalNeighborhood temporal_neighbors(node_id u, timestamp_t t_min) const;

  timestamp_t min_ts() const { return min_ts_; }
  timestamp_t max_ts() const { return max_ts_; }
  // max ts - min ts over all edges; 0 for a single distinct timestamp.
  timestamp_t duration() const { return temporal_ ? max_ts_ - min_ts_ : 0; }

  void check_node(node_id u) const;

 private:
  friend class GraphBuilder;

  std::vector<Edge> edges_;
  std::vector<type_id> node_types_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, node_id> label_ids_;
  std::vector<std::string> type_names_;
  std::size_t num_edge_types_ = 1;
  bool directed_ = false;
  bool temporal_ = false;
  bool has_weights_ = false;
  bool has_edge_types_ = false;
  timestamp_t min_ts_ = 0;
  timestamp_t max_ts_ = 0;

  // CSR adjacency.
  std::vector<std::size_t> adj_offsets_;
  std::vector<AdjEntry> adj_entries_;
};

// Incremental construction; finalize() sorts adjacency and freezes the graph.
class GraphBuilder {
 public:
  GraphBuilder(bool directed, bool temporal) {
    g_.directed_ = directed;
    g_.temporal_ = temporal;
  }

  node_id add_node(const std::string& label);
  node_id node_for(const std::string& label);  // add if missing
  void set_node_type(node_id u, const std::string& type_name);
  void add_edge(node_id src, node_id dst, timestamp_t ts, double weight, type_id etype);
  void mark_weights() { g_.has_weights_ = true; }
  void mark_edge_types() { g_.has_edge_types_ = true; }

  std::size_t num_nodes() const { return g_.labels_.size(); }
  TemporalGraph finalize();

 private:
  TemporalGraph g_;
  std::unordered_map<std::string, type_id> type_ids_;
};

struct EdgeListSchema {
  // Ordered subset of {src, dst, timestamp, weight, edge_type, ignore};
  // must contain src and dst. "ignore" columns are parsed and dropped.
  std::vector<std::string> columns;

  static EdgeListSchema parse(const std::string& spec);
  bool has(const std::string& name) const;
};

using NodeTypeTable = std::unordered_map<std::string, std::string>;

struct LoadOptions {
  EdgeListSchema schema = EdgeListSchema::parse("src dst timestamp");
  bool directed = false;
};

// "label<TAB>type" lines; '#' comments skipped.
NodeTypeTable load_node_types(std::istream& in);
NodeTypeTable load_node_types_file(const std::string& path);

// Whitespace- or comma-separated edge list, one edge per line, columns per
// schema. Nodes named only in the type table become isolated nodes.
TemporalGraph load_edge_list(std::istream& in, const LoadOptions& opt,
                             const NodeTypeTable* types = nullptr);
TemporalGraph load_edge_list_file(const std::string& path, const LoadOptions& opt,
                                  const NodeTypeTable* types = nullptr);

// Canonical text form: edges in stored order, columns src dst [timestamp]
// [weight] [edge_type] according to the graph's flags. Reloading with the
// matching schema reproduces the graph.
void write_edge_list(const TemporalGraph& g, std::ostream& out);
EdgeListSchema canonical_schema(const TemporalGraph& g);
void write_node_types(const TemporalGraph& g, std::ostream& out);

}  // namespace tgsketch
