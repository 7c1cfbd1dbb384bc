#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgsketch/graph.hpp"

namespace tgsketch {

enum class FeatureKind { derived, attribute };

// N x |F| dense matrix of per-node feature values. Immutable once built.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major
  std::vector<std::string> names;
  std::vector<FeatureKind> kinds;

  double at(node_id u, std::size_t j) const { return values[u * cols + j]; }
};

// Degree-based structural features: [total] for undirected graphs,
// [total, in, out] for directed ones.
FeatureMatrix derive_structural_features(const TemporalGraph& g);

using AttributeTable = std::unordered_map<std::string, std::vector<double>>;

// "label<TAB>v1,v2,..." lines.
AttributeTable load_attributes(std::istream& in);
AttributeTable load_attributes_file(const std::string& path);

FeatureMatrix attach_attributes(FeatureMatrix m, const TemporalGraph& g,
                                const AttributeTable& attrs, double fill = 0.0);

// Per-feature logarithmic binning. Bin 0 holds the value 0 (after shifting
// negatives by the observed minimum); bin k >= 1 covers the dyadic range
// (2^(k-2), 2^(k-1)], clamped to the last bin.
struct BinningScheme {
  struct FeatureBins {
    double shift = 0.0;  // added before binning; 0 unless negatives observed
    double max_value = 0.0;
  };
  int bin_count = 0;
  std::vector<FeatureBins> per_feature;

  int bin_of(std::size_t feature, double value) const;
  std::size_t num_features() const { return per_feature.size(); }
  // Dimensionality of one distance's histogram: |F| * |T_V| * b.
  std::size_t histogram_dim(std::size_t num_types) const {
    return per_feature.size() * num_types * static_cast<std::size_t>(bin_count);
  }
};

BinningScheme fit_log_bins(const FeatureMatrix& m, int bins);

}  // namespace tgsketch
