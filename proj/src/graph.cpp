#include "tgsketch/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tgsketch/errors.hpp"

namespace tgsketch {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
      if (!cur.empty()) {
        out.push_back(std::move(cur));
        cur.clear();
      }
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') continue;
    return c == '#';
  }
  return true;
}

timestamp_t parse_timestamp(const std::string& s, std::size_t line_no) {
  timestamp_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec == std::errc() && ptr == s.data() + s.size()) return value;
  // Allow real-valued seconds; truncate toward zero.
  try {
    std::size_t pos = 0;
    double d = std::stod(s, &pos);
    if (pos == s.size()) return static_cast<timestamp_t>(d);
  } catch (const std::exception&) {
  }
  throw parse_error(line_no, "bad timestamp '" + s + "'");
}

double parse_weight(const std::string& s, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    double w = std::stod(s, &pos);
    if (pos == s.size()) return w;
  } catch (const std::exception&) {
  }
  throw parse_error(line_no, "bad weight '" + s + "'");
}

}  // namespace

node_id TemporalGraph::id_of(const std::string& label) const {
  auto it = label_ids_.find(label);
  if (it == label_ids_.end()) throw std::out_of_range("unknown node label '" + label + "'");
  return it->second;
}

void TemporalGraph::check_node(node_id u) const {
  if (u >= num_nodes()) throw std::out_of_range("node id " + std::to_string(u) + " out of range");
}

std::span<const AdjEntry> TemporalGraph::adjacency(node_id u) const {
  check_node(u);
  return {adj_entries_.data() + adj_offsets_[u], adj_offsets_[u + 1] - adj_offsets_[u]};
}

DegreeProfile TemporalGraph::degree_profile(node_id u) const {
  check_node(u);
  DegreeProfile d;
  for (const Edge& e : edges_) {
    if (directed_) {
      if (e.src == u) d.out++;
      if (e.dst == u) d.in++;
    } else {
      if (e.src == u) d.total++;
      if (e.dst == u) d.total++;
    }
  }
  if (directed_) {
    d.total = d.in + d.out;
  } else {
    d.in = d.total;
    d.out = d.total;
  }
  return d;
}

TemporalNeighborhood TemporalGraph::temporal_neighbors(node_id u, timestamp_t t_min) const {
  TemporalNeighborhood nb;
  nb.origin = u;
  nb.t_min = t_min;
  auto adj = adjacency(u);
  if (!temporal_) {
    nb.entries.assign(adj.begin(), adj.end());
    return nb;
  }
  // Adjacency is sorted by timestamp; keep the valid suffix.
  auto first = std::lower_bound(adj.begin(), adj.end(), t_min,
                                [](const AdjEntry& e, timestamp_t t) { return e.ts < t; });
  nb.entries.assign(first, adj.end());
  return nb;
}

node_id GraphBuilder::add_node(const std::string& label) {
  auto [it, inserted] = g_.label_ids_.emplace(label, static_cast<node_id>(g_.labels_.size()));
  if (inserted) {
    g_.labels_.push_back(label);
    g_.node_types_.push_back(0);
  }
  return it->second;
}

node_id GraphBuilder::node_for(const std::string& label) { return add_node(label); }

void GraphBuilder::set_node_type(node_id u, const std::string& type_name) {
  auto [it, inserted] =
      type_ids_.emplace(type_name, static_cast<type_id>(g_.type_names_.size()));
  if (inserted) g_.type_names_.push_back(type_name);
  g_.node_types_[u] = it->second;
}

void GraphBuilder::add_edge(node_id src, node_id dst, timestamp_t ts, double weight,
                            type_id etype) {
  if (src >= g_.labels_.size() || dst >= g_.labels_.size())
    throw std::out_of_range("edge endpoint out of range");
  if (weight <= 0.0) throw validation_error("edge weight must be positive");
  Edge e{src, dst, ts, weight, etype};
  if (g_.edges_.empty()) {
    g_.min_ts_ = ts;
    g_.max_ts_ = ts;
  } else {
    g_.min_ts_ = std::min(g_.min_ts_, ts);
    g_.max_ts_ = std::max(g_.max_ts_, ts);
  }
  g_.edges_.push_back(e);
}

TemporalGraph GraphBuilder::finalize() {
  if (g_.type_names_.empty()) g_.type_names_.push_back("default");
  std::size_t max_etype = 0;
  for (const Edge& e : g_.edges_) max_etype = std::max<std::size_t>(max_etype, e.etype);
  g_.num_edge_types_ = max_etype + 1;

  const std::size_t n = g_.labels_.size();
  std::vector<std::size_t> counts(n + 1, 0);
  for (const Edge& e : g_.edges_) {
    counts[e.src]++;
    if (!g_.directed_) counts[e.dst]++;
  }
  g_.adj_offsets_.assign(n + 1, 0);
  for (std::size_t u = 0; u < n; ++u) g_.adj_offsets_[u + 1] = g_.adj_offsets_[u] + counts[u];
  g_.adj_entries_.resize(g_.adj_offsets_[n]);

  std::vector<std::size_t> cursor(g_.adj_offsets_.begin(), g_.adj_offsets_.end() - 1);
  for (std::uint32_t i = 0; i < g_.edges_.size(); ++i) {
    const Edge& e = g_.edges_[i];
    g_.adj_entries_[cursor[e.src]++] = AdjEntry{e.dst, e.ts, e.weight, i};
    if (!g_.directed_) g_.adj_entries_[cursor[e.dst]++] = AdjEntry{e.src, e.ts, e.weight, i};
  }
  for (std::size_t u = 0; u < n; ++u) {
    auto begin = g_.adj_entries_.begin() + g_.adj_offsets_[u];
    auto end = g_.adj_entries_.begin() + g_.adj_offsets_[u + 1];
    std::stable_sort(begin, end,
                     [](const AdjEntry& a, const AdjEntry& b) { return a.ts < b.ts; });
  }
  return std::move(g_);
}

EdgeListSchema EdgeListSchema::parse(const std::string& spec) {
  EdgeListSchema s;
  s.columns = split_fields(spec);
  for (const auto& c : s.columns) {
    if (c != "src" && c != "dst" && c != "timestamp" && c != "weight" && c != "edge_type" &&
        c != "ignore")
      throw validation_error("unknown schema column '" + c + "'");
  }
  if (!s.has("src") || !s.has("dst"))
    throw validation_error("schema must contain src and dst columns");
  return s;
}

bool EdgeListSchema::has(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

NodeTypeTable load_node_types(std::istream& in) {
  NodeTypeTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() != 2)
      throw parse_error(line_no, "expected 'label<TAB>type', got " +
                                     std::to_string(fields.size()) + " fields");
    table[fields[0]] = fields[1];
  }
  return table;
}

NodeTypeTable load_node_types_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open node type file '" + path + "'");
  return load_node_types(in);
}

TemporalGraph load_edge_list(std::istream& in, const LoadOptions& opt,
                             const NodeTypeTable* types) {
  const auto& cols = opt.schema.columns;
  const bool temporal = opt.schema.has("timestamp");
  GraphBuilder builder(opt.directed, temporal);
  if (opt.schema.has("weight")) builder.mark_weights();
  if (opt.schema.has("edge_type")) builder.mark_edge_types();

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() != cols.size())
      throw parse_error(line_no, "expected " + std::to_string(cols.size()) + " fields, got " +
                                     std::to_string(fields.size()));
    std::string src_label, dst_label;
    timestamp_t ts = 0;
    double weight = 1.0;
    long etype = 0;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string& c = cols[i];
      if (c == "src") {
        src_label = fields[i];
      } else if (c == "dst") {
        dst_label = fields[i];
      } else if (c == "timestamp") {
        ts = parse_timestamp(fields[i], line_no);
      } else if (c == "weight") {
        weight = parse_weight(fields[i], line_no);
        if (weight < 0.0) throw validation_error("line " + std::to_string(line_no) +
                                                 ": negative weight " + fields[i]);
        if (weight == 0.0) throw validation_error("line " + std::to_string(line_no) +
                                                  ": zero weight");
      } else if (c == "edge_type") {
        try {
          etype = std::stol(fields[i]);
        } catch (const std::exception&) {
          throw parse_error(line_no, "bad edge type '" + fields[i] + "'");
        }
        if (etype < 0) throw parse_error(line_no, "negative edge type");
      }
    }
    node_id s = builder.node_for(src_label);
    node_id d = builder.node_for(dst_label);
    builder.add_edge(s, d, ts, weight, static_cast<type_id>(etype));
  }

  if (types) {
    // Type-only labels become isolated nodes, in table-independent order.
    std::vector<std::pair<std::string, std::string>> sorted(types->begin(), types->end());
    std::sort(sorted.begin(), sorted.end());
    for (const auto& [label, type_name] : sorted) {
      node_id u = builder.node_for(label);
      builder.set_node_type(u, type_name);
    }
  }
  return builder.finalize();
}

TemporalGraph load_edge_list_file(const std::string& path, const LoadOptions& opt,
                                  const NodeTypeTable* types) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open edge list '" + path + "'");
  return load_edge_list(in, opt, types);
}

EdgeListSchema canonical_schema(const TemporalGraph& g) {
  std::string spec = "src dst";
  if (g.temporal()) spec += " timestamp";
  if (g.has_weights()) spec += " weight";
  if (g.has_edge_types()) spec += " edge_type";
  return EdgeListSchema::parse(spec);
}

void write_edge_list(const TemporalGraph& g, std::ostream& out) {
  out << std::setprecision(17);  // weights survive the round trip
  for (const Edge& e : g.edges()) {
    out << g.label(e.src) << ' ' << g.label(e.dst);
    if (g.temporal()) out << ' ' << e.ts;
    if (g.has_weights()) out << ' ' << e.weight;
    if (g.has_edge_types()) out << ' ' << e.etype;
    out << '\n';
  }
}

void write_node_types(const TemporalGraph& g, std::ostream& out) {
  for (node_id u = 0; u < g.num_nodes(); ++u)
    out << g.label(u) << '\t' << g.type_names()[g.node_type(u)] << '\n';
}

}  // namespace tgsketch
