#include "tgsketch/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>

#include "tgsketch/errors.hpp"

namespace tgsketch {

FeatureMatrix derive_structural_features(const TemporalGraph& g) {
  FeatureMatrix m;
  m.rows = g.num_nodes();
  if (g.directed()) {
    m.names = {"total_degree", "in_degree", "out_degree"};
  } else {
    m.names = {"total_degree"};
  }
  m.cols = m.names.size();
  m.kinds.assign(m.cols, FeatureKind::derived);
  m.values.assign(m.rows * m.cols, 0.0);

  // One edge pass instead of per-node degree_profile scans.
  std::vector<std::uint64_t> in(m.rows, 0), out(m.rows, 0);
  for (const Edge& e : g.edges()) {
    if (g.directed()) {
      out[e.src]++;
      in[e.dst]++;
    } else {
      out[e.src]++;
      out[e.dst]++;
    }
  }
  for (node_id u = 0; u < m.rows; ++u) {
    if (g.directed()) {
      m.values[u * 3 + 0] = static_cast<double>(in[u] + out[u]);
      m.values[u * 3 + 1] = static_cast<double>(in[u]);
      m.values[u * 3 + 2] = static_cast<double>(out[u]);
    } else {
      m.values[u] = static_cast<double>(out[u]);
    }
  }
  return m;
}

AttributeTable load_attributes(std::istream& in) {
  AttributeTable table;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw parse_error(line_no, "expected 'label<TAB>v1,v2,...'");
    std::string label = line.substr(0, tab);
    std::vector<double> vec;
    std::string field;
    for (std::size_t i = tab + 1; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field.empty()) throw parse_error(line_no, "empty attribute value");
        try {
          vec.push_back(std::stod(field));
        } catch (const std::exception&) {
          throw parse_error(line_no, "bad attribute value '" + field + "'");
        }
        field.clear();
      } else if (line[i] != '\r') {
        field.push_back(line[i]);
      }
    }
    if (expected == 0) expected = vec.size();
    if (vec.size() != expected)
      throw validation_error("line " + std::to_string(line_no) +
                             ": attribute vectors must share one length (" +
                             std::to_string(vec.size()) + " vs " + std::to_string(expected) + ")");
    table[label] = std::move(vec);
  }
  return table;
}

AttributeTable load_attributes_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open attribute file '" + path + "'");
  return load_attributes(in);
}

FeatureMatrix attach_attributes(FeatureMatrix m, const TemporalGraph& g,
                                const AttributeTable& attrs, double fill) {
  std::size_t width = 0;
  for (const auto& [label, vec] : attrs) {
    if (width == 0) width = vec.size();
    if (vec.size() != width)
      throw validation_error("attribute vectors must share one length");
  }
  if (width == 0) return m;

  FeatureMatrix out;
  out.rows = m.rows;
  out.cols = m.cols + width;
  out.names = m.names;
  out.kinds = m.kinds;
  for (std::size_t j = 0; j < width; ++j) {
    out.names.push_back("attr_" + std::to_string(j));
    out.kinds.push_back(FeatureKind::attribute);
  }
  out.values.assign(out.rows * out.cols, 0.0);
  for (node_id u = 0; u < m.rows; ++u) {
    double* row = out.values.data() + u * out.cols;
    std::copy(m.values.begin() + u * m.cols, m.values.begin() + (u + 1) * m.cols, row);
    auto it = attrs.find(g.label(u));
    if (it == attrs.end()) {
      std::fill(row + m.cols, row + out.cols, fill);
    } else {
      std::copy(it->second.begin(), it->second.end(), row + m.cols);
    }
  }
  return out;
}

int BinningScheme::bin_of(std::size_t feature, double value) const {
  const FeatureBins& fb = per_feature[feature];
  const double x = value + fb.shift;
  if (!(x > 0.0)) return 0;
  if (bin_count == 1) return 0;
  if (x >= fb.max_value || fb.max_value <= 1.0) return bin_count - 1;
  if (x <= 1.0) return 1;
  // Edges at max^(k/(b-1)): equal width in log2 space over (0, max].
  const double ratio = std::log2(x) / std::log2(fb.max_value);
  const int k = static_cast<int>(std::ceil((bin_count - 1) * ratio - 1e-9));
  return std::clamp(k, 1, bin_count - 1);
}

BinningScheme fit_log_bins(const FeatureMatrix& m, int bins) {
  if (bins < 1) throw validation_error("bin count must be >= 1");
  BinningScheme scheme;
  scheme.bin_count = bins;
  scheme.per_feature.resize(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < m.rows; ++u) {
      double v = m.at(static_cast<node_id>(u), j);
      if (!std::isfinite(v)) throw validation_error("non-finite feature value");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (m.rows == 0) lo = hi = 0.0;
    auto& fb = scheme.per_feature[j];
    fb.shift = lo < 0.0 ? -lo : 0.0;
    fb.max_value = hi + fb.shift;
  }
  return scheme;
}

}  // namespace tgsketch
