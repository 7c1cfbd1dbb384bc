#include "tgsketch/eval.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>

#include "tgsketch/errors.hpp"

namespace tgsketch {

ReplicaInjection inject_replicas(const TemporalGraph& g, double fraction, double p1, double p2,
                                 std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw validation_error("replica fraction must be in (0, 1]");
  if (p1 < 0.0 || p1 > 1.0 || p2 < 0.0 || p2 > 1.0)
    throw validation_error("p1 and p2 must be probabilities");

  const std::size_t n = g.num_nodes();
  std::vector<std::uint64_t> degree(n, 0);  // total degree; self-loops count twice
  for (const Edge& e : g.edges()) {
    degree[e.src]++;
    degree[e.dst]++;
  }
  const double mean =
      n == 0 ? 0.0
             : static_cast<double>(std::accumulate(degree.begin(), degree.end(), std::uint64_t{0})) /
                   static_cast<double>(n);
  std::vector<node_id> eligible;
  for (node_id u = 0; u < n; ++u)
    if (static_cast<double>(degree[u]) > mean) eligible.push_back(u);
  if (eligible.empty()) throw validation_error("no node has degree above the mean");

  rng_engine rng(derive_seed(seed, 0, 0x7265706cULL));  // "repl"
  std::size_t want = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  want = std::max<std::size_t>(want, 1);
  want = std::min(want, eligible.size());
  for (std::size_t i = 0; i < want; ++i) {
    std::size_t j = i + uniform_index(rng, eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<node_id> sampled(eligible.begin(), eligible.begin() + want);
  std::sort(sampled.begin(), sampled.end());

  GraphBuilder builder(g.directed(), g.temporal());
  if (g.has_weights()) builder.mark_weights();
  if (g.has_edge_types()) builder.mark_edge_types();
  for (node_id u = 0; u < n; ++u) {
    builder.add_node(g.label(u));
    builder.set_node_type(u, g.type_names()[g.node_type(u)]);
  }
  std::vector<node_id> replica_of(n, 0);
  for (node_id u : sampled) {
    node_id rep = builder.add_node(g.label(u) + "~rep");
    builder.set_node_type(rep, g.type_names()[g.node_type(u)]);
    replica_of[u] = rep;
  }

  // Original incidence lists; self-loops appear once and move as a whole.
  std::vector<std::vector<std::uint32_t>> incident(n);
  for (std::uint32_t i = 0; i < g.num_edges(); ++i) {
    const Edge& e = g.edge(i);
    incident[e.src].push_back(i);
    if (e.dst != e.src) incident[e.dst].push_back(i);
  }

  std::vector<bool> move_src(g.num_edges(), false), move_dst(g.num_edges(), false);
  std::vector<Edge> duplicates;
  for (node_id u : sampled) {
    for (std::uint32_t i : incident[u]) {
      const Edge& e = g.edge(i);
      const bool keep = uniform01(rng) < p1;
      const bool dup = uniform01(rng) < p2;
      if (!keep) {
        if (e.src == u) move_src[i] = true;
        if (e.dst == u) move_dst[i] = true;
      }
      if (dup) {
        Edge d = e;
        if (e.src == u) d.src = replica_of[u];
        if (e.dst == u) d.dst = replica_of[u];
        duplicates.push_back(d);
      }
    }
  }

  for (std::uint32_t i = 0; i < g.num_edges(); ++i) {
    Edge e = g.edge(i);
    if (move_src[i]) e.src = replica_of[e.src];
    if (move_dst[i]) e.dst = replica_of[e.dst];
    builder.add_edge(e.src, e.dst, e.ts, e.weight, e.etype);
  }
  for (const Edge& d : duplicates) builder.add_edge(d.src, d.dst, d.ts, d.weight, d.etype);

  ReplicaInjection result;
  result.truth.fraction = fraction;
  result.truth.p1 = p1;
  result.truth.p2 = p2;
  result.truth.seed = seed;
  for (node_id u : sampled) result.truth.pairs.emplace_back(u, replica_of[u]);
  result.graph = builder.finalize();
  return result;
}

std::vector<std::pair<node_id, node_id>> sample_negatives(
    const std::vector<std::pair<node_id, node_id>>& positives, std::size_t pool_size,
    std::size_t count, rng_engine& rng) {
  if (pool_size < 2) throw validation_error("negative pool must contain at least two nodes");
  std::set<std::pair<node_id, node_id>> forbidden;
  for (auto [u, v] : positives)
    if (u < pool_size && v < pool_size)
      forbidden.emplace(std::min(u, v), std::max(u, v));
  const double all_pairs = 0.5 * static_cast<double>(pool_size) *
                           static_cast<double>(pool_size - 1);
  if (all_pairs - static_cast<double>(forbidden.size()) < static_cast<double>(count))
    throw validation_error("negative pool exhausted: not enough non-positive pairs");

  std::set<std::pair<node_id, node_id>> taken;
  std::vector<std::pair<node_id, node_id>> out;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * (count + 100);
  while (out.size() < count) {
    if (++attempts > max_attempts)
      throw validation_error("negative sampling did not converge (pool too dense)");
    node_id a = static_cast<node_id>(uniform_index(rng, pool_size));
    node_id b = static_cast<node_id>(uniform_index(rng, pool_size));
    if (a == b) continue;
    std::pair<node_id, node_id> p{std::min(a, b), std::max(a, b)};
    if (forbidden.count(p) || taken.count(p)) continue;
    taken.insert(p);
    out.push_back(p);
  }
  return out;
}

std::pair<LabeledPairs, LabeledPairs> split_pairs(const LabeledPairs& all, double ratio,
                                                  std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw validation_error("split ratio must be in (0, 1)");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < all.size(); ++i) (all.labels[i] ? pos : neg).push_back(i);
  if (pos.empty() || neg.empty())
    throw validation_error("both classes must be present to split");

  rng_engine rng(derive_seed(seed, 1, 0x73706c69ULL));  // "spli"
  LabeledPairs train, test;
  for (auto* cls : {&pos, &neg}) {
    auto& idx = *cls;
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
      std::size_t j = i + uniform_index(rng, idx.size() - i);
      std::swap(idx[i], idx[j]);
    }
    const std::size_t take =
        static_cast<std::size_t>(std::llround(ratio * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      auto& side = i < take ? train : test;
      side.add(all.pairs[idx[i]], all.labels[idx[i]]);
    }
  }
  return {train, test};
}

MetricReport compute_metrics(const std::vector<double>& scores, const std::vector<int>& labels,
                             double threshold) {
  if (scores.size() != labels.size())
    throw validation_error("scores and labels differ in length");
  MetricReport r;
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (labels[i]) {
      r.positives++;
      pred ? tp++ : fn++;
    } else {
      r.negatives++;
      pred ? fp++ : tn++;
    }
  }
  const std::size_t total = scores.size();
  r.acc = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  const double denom = static_cast<double>(2 * tp + fp + fn);
  r.f1 = denom > 0 ? 2.0 * static_cast<double>(tp) / denom : 0.0;

  if (r.positives == 0 || r.negatives == 0) {
    r.auc_defined = false;
    r.auc = std::numeric_limits<double>::quiet_NaN();
    return r;
  }

  // Rank statistic with average ranks on ties.
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j < total && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based ranks i+1..j
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) pos_rank_sum += avg_rank;
    i = j;
  }
  const double p = static_cast<double>(r.positives);
  const double q = static_cast<double>(r.negatives);
  r.auc = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
  r.auc_defined = true;
  return r;
}

void write_ground_truth(const ReplicaGroundTruth& truth, const TemporalGraph& g,
                        std::ostream& out) {
  for (auto [u, rep] : truth.pairs) out << g.label(u) << '\t' << g.label(rep) << '\n';
}

LabeledPairs load_pair_file(std::istream& in,
                            const std::unordered_map<std::string, node_id>& ids) {
  LabeledPairs pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == '\t') {
        fields.push_back(cur);
        cur.clear();
      } else if (c != '\r') {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 3)
      throw parse_error(line_no, "expected 'label_u<TAB>label_v<TAB>{0,1}'");
    auto u = ids.find(fields[0]);
    auto v = ids.find(fields[1]);
    if (u == ids.end()) throw validation_error("line " + std::to_string(line_no) +
                                               ": unknown node label '" + fields[0] + "'");
    if (v == ids.end()) throw validation_error("line " + std::to_string(line_no) +
                                               ": unknown node label '" + fields[1] + "'");
    if (fields[2] != "0" && fields[2] != "1")
      throw parse_error(line_no, "label must be 0 or 1");
    pairs.add({u->second, v->second}, fields[2] == "1" ? 1 : 0);
  }
  return pairs;
}

std::unordered_map<std::string, node_id> label_index(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, node_id> ids;
  ids.reserve(labels.size());
  for (node_id u = 0; u < labels.size(); ++u) ids.emplace(labels[u], u);
  return ids;
}

}  // namespace tgsketch
