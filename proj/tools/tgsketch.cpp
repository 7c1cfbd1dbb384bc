// Command line front end: embed, eval, stitch, buckets, replicas.
//
// Exit codes: 0 success, 1 usage, 2 data validation, 3 runtime failure.

#include <omp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "tgsketch/errors.hpp"
#include "tgsketch/pipeline.hpp"

namespace {

using namespace tgsketch;

// Rethrows with the pipeline stage prepended so failures name their stage.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const validation_error& e) {
    throw validation_error(std::string(name) + ": " + e.what());
  } catch (const std::out_of_range& e) {
    throw validation_error(std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

struct GraphOpts {
  std::string input;
  std::string schema = "src dst timestamp";
  bool directed = false;
  std::string node_types;
  std::string attributes;
};

struct EmbedOpts {
  GraphOpts graph;
  int walks = 10;
  int walk_length = 20;
  std::string policy = "short";
  int max_dt = 3;
  int dim = 128;
  int bins = 5;
  std::uint64_t seed = 1;
  int threads = 0;
};

void add_graph_flags(CLI::App* cmd, GraphOpts& o, bool required_input = true) {
  auto* in = cmd->add_option("--input", o.input, "Edge list file");
  if (required_input) in->required();
  cmd->add_option("--schema", o.schema,
                  "Edge list columns among src,dst,timestamp,weight,edge_type,ignore")
      ->capture_default_str();
  cmd->add_flag("--directed", o.directed, "Treat edges as directed");
  cmd->add_option("--node-types", o.node_types, "Node type table (label<TAB>type)");
  cmd->add_option("--attributes", o.attributes, "Node attribute table (label<TAB>v1,v2,...)");
}

void add_embed_flags(CLI::App* cmd, EmbedOpts& o) {
  add_graph_flags(cmd, o.graph);
  cmd->add_option("--walks", o.walks, "Walks per edge (R)")->capture_default_str();
  cmd->add_option("--walk-length", o.walk_length, "Max walk length (L)")->capture_default_str();
  cmd->add_option("--policy", o.policy, "Walk policy: short|long|static")
      ->check(CLI::IsMember({"short", "long", "static"}))
      ->capture_default_str();
  cmd->add_option("--max-dt", o.max_dt, "Max temporal distance (MAX)")->capture_default_str();
  cmd->add_option("--dim", o.dim, "Sketch width in bits (K)")->capture_default_str();
  cmd->add_option("--bins", o.bins, "Logarithmic bins per feature (b)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base RNG seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
}

EmbedParams to_params(const EmbedOpts& o) {
  EmbedParams p;
  p.walks_per_edge = o.walks;
  p.walk_length = o.walk_length;
  p.max_distance = o.max_dt;
  p.sketch_bits = o.dim;
  p.bins = o.bins;
  p.mode = parse_walk_mode(o.policy);
  p.seed = o.seed;
  return p;
}

void apply_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

TemporalGraph load_graph(const GraphOpts& o) {
  return stage("graph", [&] {
    LoadOptions opt;
    opt.schema = EdgeListSchema::parse(o.schema);
    opt.directed = o.directed;
    std::optional<NodeTypeTable> types;
    if (!o.node_types.empty()) types = load_node_types_file(o.node_types);
    return load_edge_list_file(o.input, opt, types ? &*types : nullptr);
  });
}

std::optional<AttributeTable> load_attrs(const GraphOpts& o) {
  if (o.attributes.empty()) return std::nullopt;
  return stage("features", [&] { return load_attributes_file(o.attributes); });
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

void write_manifest(CLI::App* cmd, const std::string& path) {
  auto out = open_out(path);
  out << "# replay with: tgsketch --config " << path << "\n";
  const CLI::App* root = cmd;
  while (root->get_parent()) root = root->get_parent();
  out << root->config_to_str(/*default_also=*/true, /*write_description=*/false);
}

void print_metrics(const MetricReport& m, std::ostream& out, bool with_auc) {
  if (with_auc && m.auc_defined) out << "auc=" << m.auc << '\n';
  out << "acc=" << m.acc << '\n';
  out << "f1=" << m.f1 << '\n';
  out << "positives=" << m.positives << '\n';
  out << "negatives=" << m.negatives << '\n';
}

nlohmann::json metrics_json(const MetricReport& m, bool with_auc) {
  nlohmann::json j;
  if (with_auc && m.auc_defined) j["auc"] = m.auc;
  j["acc"] = m.acc;
  j["f1"] = m.f1;
  j["positives"] = m.positives;
  j["negatives"] = m.negatives;
  return j;
}

int run_embed(CLI::App* cmd, const EmbedOpts& o, const std::string& output,
              const std::string& format, std::string planes_path, std::string manifest_path,
              const std::string& dump_histograms) {
  apply_threads(o.threads);
  EmbedParams params = to_params(o);
  stage("config", [&] { params.validate(); });

  TemporalGraph g = load_graph(o.graph);
  auto attrs = load_attrs(o.graph);
  // Policy check before the heavy stages so bad flag combinations fail fast.
  stage("config", [&] { WalkPolicy::for_graph(g, params.mode); });

  EmbedResult result = stage("embed", [&] { return embed_graph(g, params, attrs ? &*attrs : nullptr); });

  stage("output", [&] {
    if (format == "sparse") {
      auto out = open_out(output);
      write_sketches_sparse(result.sketches, g.labels(), out);
    } else if (format == "packed") {
      auto out = open_out(output);
      write_sketches_packed(result.sketches, out);
      auto labels_out = open_out(output + ".labels");
      for (const auto& label : g.labels()) labels_out << label << '\n';
    } else {
      throw validation_error("unknown format '" + format + "' (expected sparse|packed)");
    }
    if (planes_path.empty()) planes_path = output + ".planes";
    auto planes_out = open_out(planes_path);
    write_hyperplanes(result.planes, planes_out);
    if (!dump_histograms.empty()) {
      auto hist_out = open_out(dump_histograms);
      dump_histograms_csv(result.histograms, g, hist_out);
    }
  });

  if (manifest_path.empty()) manifest_path = output + ".manifest";
  stage("output", [&] { write_manifest(cmd, manifest_path); });
  std::cerr << "embedded " << g.num_nodes() << " nodes x " << result.sketches.total_bits()
            << " bits -> " << output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Binary node sketches for temporal heterogeneous graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Replay a manifest or read options from a key=value file (flags win)");

  // --- embed ---
  auto* embed_cmd = app.add_subcommand("embed", "Compute node sketches for a graph");
  embed_cmd->configurable();
  EmbedOpts embed_opts;
  std::string embed_output, embed_format = "packed", embed_planes, embed_manifest, embed_dump;
  add_embed_flags(embed_cmd, embed_opts);
  embed_cmd->add_option("--output", embed_output, "Sketch output file")->required();
  embed_cmd->add_option("--format", embed_format, "Output format: packed|sparse")
      ->capture_default_str();
  embed_cmd->add_option("--planes-out", embed_planes,
                        "Hyperplane output file (default <output>.planes)");
  embed_cmd->add_option("--manifest", embed_manifest,
                        "Manifest output file (default <output>.manifest)");
  embed_cmd->add_option("--dump-histograms", embed_dump,
                        "Also write per-node context histograms as CSV");

  // --- eval ---
  auto* eval_cmd =
      app.add_subcommand("eval", "Replica-injection benchmark with supervised stitching");
  eval_cmd->configurable();
  EmbedOpts eval_opts;
  add_embed_flags(eval_cmd, eval_opts);
  SupervisedParams eval_params;
  std::string eval_report, eval_json, eval_manifest = "tgsketch-eval.manifest";
  eval_cmd->add_option("--fraction", eval_params.fraction, "Fraction of nodes to replicate")
      ->capture_default_str();
  eval_cmd->add_option("--p1", eval_params.p1, "Probability an edge stays at the original")
      ->capture_default_str();
  eval_cmd->add_option("--p2", eval_params.p2, "Probability an edge is copied to the replica")
      ->capture_default_str();
  eval_cmd->add_option("--lambda", eval_params.lambda, "Inverse regularization strength")
      ->capture_default_str();
  eval_cmd->add_option("--tol", eval_params.tol, "Gradient stopping tolerance")
      ->capture_default_str();
  eval_cmd->add_option("--max-iter", eval_params.max_iter, "Max optimizer iterations")
      ->capture_default_str();
  eval_cmd->add_option("--split", eval_params.split_ratio, "Training fraction of the pairs")
      ->capture_default_str();
  eval_cmd->add_option("--report", eval_report, "Also write metrics as key=value lines");
  eval_cmd->add_option("--json", eval_json, "Also write metrics as JSON");
  eval_cmd->add_option("--manifest", eval_manifest, "Manifest output file")
      ->capture_default_str();

  // --- stitch ---
  auto* stitch_cmd =
      app.add_subcommand("stitch", "Unsupervised stitching via LSH banding");
  stitch_cmd->configurable();
  EmbedOpts stitch_opts;
  add_graph_flags(stitch_cmd, stitch_opts.graph, /*required_input=*/false);
  stitch_cmd->add_option("--walks", stitch_opts.walks, "Walks per edge (R)")
      ->capture_default_str();
  stitch_cmd->add_option("--walk-length", stitch_opts.walk_length, "Max walk length (L)")
      ->capture_default_str();
  stitch_cmd->add_option("--policy", stitch_opts.policy, "Walk policy: short|long|static")
      ->check(CLI::IsMember({"short", "long", "static"}))
      ->capture_default_str();
  stitch_cmd->add_option("--max-dt", stitch_opts.max_dt, "Max temporal distance (MAX)")
      ->capture_default_str();
  stitch_cmd->add_option("--dim", stitch_opts.dim, "Sketch width in bits (K)")
      ->capture_default_str();
  stitch_cmd->add_option("--bins", stitch_opts.bins, "Logarithmic bins per feature (b)")
      ->capture_default_str();
  stitch_cmd->add_option("--seed", stitch_opts.seed, "Base RNG seed")->capture_default_str();
  stitch_cmd->add_option("--threads", stitch_opts.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  UnsupervisedParams stitch_params;
  std::string stitch_sketches, stitch_labels, stitch_pairs, stitch_candidates;
  std::string stitch_report, stitch_json, stitch_manifest = "tgsketch-stitch.manifest";
  stitch_cmd->add_option("--fraction", stitch_params.fraction, "Fraction of nodes to replicate")
      ->capture_default_str();
  stitch_cmd->add_option("--p1", stitch_params.p1, "Probability an edge stays at the original")
      ->capture_default_str();
  stitch_cmd->add_option("--p2", stitch_params.p2, "Probability an edge is copied to the replica")
      ->capture_default_str();
  stitch_cmd->add_option("--band-bits", stitch_params.band_bits, "Bits sampled per band")
      ->capture_default_str();
  stitch_cmd->add_option("--sketches", stitch_sketches,
                         "Evaluate existing packed sketches instead of embedding");
  stitch_cmd->add_option("--labels", stitch_labels, "Label sidecar for --sketches");
  stitch_cmd->add_option("--pairs", stitch_pairs,
                         "Query pairs (label_u<TAB>label_v<TAB>{0,1}); required with --sketches");
  stitch_cmd->add_option("--candidates-out", stitch_candidates,
                         "Write co-bucketed candidate pairs to this file");
  stitch_cmd->add_option("--report", stitch_report, "Also write metrics as key=value lines");
  stitch_cmd->add_option("--json", stitch_json, "Also write metrics as JSON");
  stitch_cmd->add_option("--manifest", stitch_manifest, "Manifest output file")
      ->capture_default_str();

  // --- buckets ---
  auto* buckets_cmd = app.add_subcommand("buckets", "Dump LSH candidate pairs for sketches");
  buckets_cmd->configurable();
  std::string buckets_sketches, buckets_labels, buckets_output;
  int buckets_band_bits = 16;
  std::uint64_t buckets_seed = 1;
  buckets_cmd->add_option("--sketches", buckets_sketches, "Packed sketch file")->required();
  buckets_cmd->add_option("--labels", buckets_labels, "Label sidecar (one label per line)");
  buckets_cmd->add_option("--band-bits", buckets_band_bits, "Bits sampled per band")
      ->capture_default_str();
  buckets_cmd->add_option("--seed", buckets_seed, "Band sampling seed")->capture_default_str();
  buckets_cmd->add_option("--output", buckets_output, "Candidate pair output (default stdout)");

  // --- replicas ---
  auto* replicas_cmd =
      app.add_subcommand("replicas", "Inject replica nodes and emit the perturbed graph");
  replicas_cmd->configurable();
  GraphOpts replicas_graph;
  add_graph_flags(replicas_cmd, replicas_graph);
  double rep_fraction = 0.05, rep_p1 = 0.6, rep_p2 = 0.3;
  std::uint64_t rep_seed = 1;
  std::string rep_prefix;
  replicas_cmd->add_option("--fraction", rep_fraction, "Fraction of nodes to replicate")
      ->capture_default_str();
  replicas_cmd->add_option("--p1", rep_p1, "Probability an edge stays at the original")
      ->capture_default_str();
  replicas_cmd->add_option("--p2", rep_p2, "Probability an edge is copied to the replica")
      ->capture_default_str();
  replicas_cmd->add_option("--seed", rep_seed, "Injection seed")->capture_default_str();
  replicas_cmd->add_option("--output", rep_prefix, "Output prefix (.edges/.types/.truth)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*embed_cmd) {
      return run_embed(embed_cmd, embed_opts, embed_output, embed_format, embed_planes,
                       embed_manifest, embed_dump);
    }

    if (*eval_cmd) {
      apply_threads(eval_opts.threads);
      eval_params.embed = to_params(eval_opts);
      stage("config", [&] { eval_params.embed.validate(); });
      TemporalGraph g = load_graph(eval_opts.graph);
      auto attrs = load_attrs(eval_opts.graph);
      stage("config", [&] { WalkPolicy::for_graph(g, eval_params.embed.mode); });
      SupervisedResult result = stage("eval", [&] {
        return run_supervised_eval(g, eval_params, attrs ? &*attrs : nullptr);
      });
      print_metrics(result.metrics, std::cout, /*with_auc=*/true);
      std::cout << "train_rows=" << result.train_rows << '\n'
                << "test_rows=" << result.test_rows << '\n';
      if (!eval_report.empty()) {
        auto out = open_out(eval_report);
        print_metrics(result.metrics, out, true);
      }
      if (!eval_json.empty()) {
        auto out = open_out(eval_json);
        out << metrics_json(result.metrics, true).dump(2) << '\n';
      }
      write_manifest(eval_cmd, eval_manifest);
      return 0;
    }

    if (*stitch_cmd) {
      apply_threads(stitch_opts.threads);
      MetricReport metrics;
      std::size_t num_candidates = 0;
      std::vector<std::pair<node_id, node_id>> candidates;
      std::vector<std::string> labels;

      if (!stitch_sketches.empty()) {
        // Pre-built sketches: labels + labeled query pairs drive everything.
        if (stitch_pairs.empty())
          throw validation_error("config: --pairs is required with --sketches");
        if (stitch_labels.empty()) stitch_labels = stitch_sketches + ".labels";
        SketchMatrix z = stage("input", [&] {
          std::ifstream in(stitch_sketches, std::ios::binary);
          if (!in) throw validation_error("cannot open '" + stitch_sketches + "'");
          return read_sketches_packed(in);
        });
        stage("input", [&] {
          std::ifstream in(stitch_labels);
          if (!in) throw validation_error("cannot open '" + stitch_labels + "'");
          std::string line;
          while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            labels.push_back(line);
          }
          if (labels.size() != z.num_nodes())
            throw validation_error("label sidecar does not match sketch row count");
        });
        LabeledPairs queries = stage("input", [&] {
          std::ifstream in(stitch_pairs);
          if (!in) throw validation_error("cannot open '" + stitch_pairs + "'");
          return load_pair_file(in, label_index(labels));
        });
        BucketTable table = stage("stitch", [&] {
          return build_buckets(z, stitch_params.band_bits, stage_seed(stitch_opts.seed, "bands"));
        });
        auto decisions = stitch_unsupervised(table, queries.pairs);
        std::vector<double> scores(decisions.begin(), decisions.end());
        metrics = compute_metrics(scores, queries.labels);
        metrics.auc_defined = false;
        candidates = candidate_pairs(table);
        num_candidates = candidates.size();
      } else {
        if (stitch_opts.graph.input.empty())
          throw validation_error("config: provide --input or --sketches");
        stitch_params.embed = to_params(stitch_opts);
        stage("config", [&] { stitch_params.embed.validate(); });
        TemporalGraph g = load_graph(stitch_opts.graph);
        auto attrs = load_attrs(stitch_opts.graph);
        stage("config", [&] { WalkPolicy::for_graph(g, stitch_params.embed.mode); });
        UnsupervisedResult result = stage("stitch", [&] {
          return run_unsupervised_stitch(g, stitch_params, attrs ? &*attrs : nullptr);
        });
        metrics = result.metrics;
        candidates = std::move(result.candidates);
        labels = std::move(result.labels);
        num_candidates = candidates.size();
      }

      print_metrics(metrics, std::cout, /*with_auc=*/false);
      std::cout << "candidates=" << num_candidates << '\n';
      if (!stitch_candidates.empty() && !candidates.empty()) {
        auto out = open_out(stitch_candidates);
        for (auto [u, v] : candidates) out << labels[u] << '\t' << labels[v] << '\n';
      }
      if (!stitch_report.empty()) {
        auto out = open_out(stitch_report);
        print_metrics(metrics, out, false);
        out << "candidates=" << num_candidates << '\n';
      }
      if (!stitch_json.empty()) {
        auto out = open_out(stitch_json);
        auto j = metrics_json(metrics, false);
        j["candidates"] = num_candidates;
        out << j.dump(2) << '\n';
      }
      write_manifest(stitch_cmd, stitch_manifest);
      return 0;
    }

    if (*buckets_cmd) {
      SketchMatrix z = stage("input", [&] {
        std::ifstream in(buckets_sketches, std::ios::binary);
        if (!in) throw validation_error("cannot open '" + buckets_sketches + "'");
        return read_sketches_packed(in);
      });
      std::vector<std::string> labels(z.num_nodes());
      if (buckets_labels.empty()) buckets_labels = buckets_sketches + ".labels";
      {
        std::ifstream in(buckets_labels);
        if (in) {
          std::string line;
          std::size_t u = 0;
          while (std::getline(in, line) && u < labels.size()) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            labels[u++] = line;
          }
        } else {
          for (node_id u = 0; u < z.num_nodes(); ++u) labels[u] = std::to_string(u);
        }
      }
      BucketTable table = stage("buckets", [&] {
        return build_buckets(z, buckets_band_bits, stage_seed(buckets_seed, "bands"));
      });
      auto pairs = candidate_pairs(table);
      std::ostream* out = &std::cout;
      std::ofstream file;
      if (!buckets_output.empty()) {
        file = open_out(buckets_output);
        out = &file;
      }
      for (auto [u, v] : pairs) (*out) << labels[u] << '\t' << labels[v] << '\n';
      std::cerr << "bands=" << table.buckets.size() << " candidates=" << pairs.size() << "\n";
      return 0;
    }

    if (*replicas_cmd) {
      TemporalGraph g = load_graph(replicas_graph);
      ReplicaInjection injection = stage("replicas", [&] {
        return inject_replicas(g, rep_fraction, rep_p1, rep_p2, rep_seed);
      });
      stage("output", [&] {
        auto edges_out = open_out(rep_prefix + ".edges");
        write_edge_list(injection.graph, edges_out);
        auto types_out = open_out(rep_prefix + ".types");
        write_node_types(injection.graph, types_out);
        auto truth_out = open_out(rep_prefix + ".truth");
        write_ground_truth(injection.truth, injection.graph, truth_out);
      });
      write_manifest(replicas_cmd, rep_prefix + ".manifest");
      std::cerr << "replicated " << injection.truth.pairs.size() << " nodes -> " << rep_prefix
                << ".{edges,types,truth}\n";
      return 0;
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
