#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tgsketch/contexts.hpp"

namespace tgsketch {

// K split across MAX segments; any remainder goes to the smallest distances.
std::vector<int> split_sketch_bits(int total_bits, int max_distance);

// Random +-1 projection vectors, one block per temporal distance. The same
// set is reused for every node and is reproducible from the seed.
struct HyperplaneSet {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<int> segment_bits;
  std::vector<std::vector<std::int8_t>> segments;  // segment s: segment_bits[s] x dim

  int total_bits() const;
};

// One segment of K_dt planes with i.i.d. uniform {-1,+1} entries.
std::vector<std::int8_t> generate_hyperplane_segment(std::size_t dim, int num_planes,
                                                     std::uint64_t seed);

HyperplaneSet generate_hyperplanes(std::size_t dim, const std::vector<int>& segment_bits,
                                   std::uint64_t seed);

// sign(h . r_i) with sign(x <= 0) = 0, so all-zero histograms map to the
// all-zero sketch.
std::vector<std::uint8_t> simhash(std::span<const std::uint32_t> histogram,
                                  std::span<const std::int8_t> planes, int num_planes);
std::vector<std::uint8_t> simhash(std::span<const double> histogram,
                                  std::span<const std::int8_t> planes, int num_planes);

// N x K bit matrix. Row bits are packed big-endian within each byte (bit k
// lives in byte k/8 at position 7 - k%8), matching the packed file format.
class SketchMatrix {
 public:
  SketchMatrix() = default;
  SketchMatrix(std::size_t num_nodes, std::vector<int> segment_bits);

  std::size_t num_nodes() const { return num_nodes_; }
  int total_bits() const { return total_bits_; }
  const std::vector<int>& segment_bits() const { return segment_bits_; }
  std::size_t bytes_per_row() const { return bytes_per_row_; }
  int segment_offset(std::size_t segment) const;

  bool get(node_id u, int bit) const {
    return (data_[u * bytes_per_row_ + bit / 8] >> (7 - bit % 8)) & 1u;
  }
  void set(node_id u, int bit, bool value) {
    auto& byte = data_[u * bytes_per_row_ + bit / 8];
    const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - bit % 8));
    if (value)
      byte |= mask;
    else
      byte &= static_cast<std::uint8_t>(~mask);
  }

  std::span<const std::uint8_t> row(node_id u) const {
    return {data_.data() + u * bytes_per_row_, bytes_per_row_};
  }
  std::span<std::uint8_t> row(node_id u) {
    return {data_.data() + u * bytes_per_row_, bytes_per_row_};
  }

  bool operator==(const SketchMatrix&) const = default;

 private:
  std::size_t num_nodes_ = 0;
  int total_bits_ = 0;
  std::vector<int> segment_bits_;
  std::size_t bytes_per_row_ = 0;
  std::vector<std::uint8_t> data_;
};

// Hashes every (node, distance) histogram and concatenates the per-distance
// sketches in increasing distance order. Parallel over nodes.
SketchMatrix assemble_embeddings(const HistogramMatrix& hists, const HyperplaneSet& planes);

// Fraction of positions where two equal-length bit rows agree.
double estimate_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                           int num_bits);
double estimate_similarity(const SketchMatrix& z, node_id u, node_id v);

// Sparse text format: one "label: i1 i2 ..." line per node listing set bits.
void write_sketches_sparse(const SketchMatrix& z, const std::vector<std::string>& labels,
                           std::ostream& out);
SketchMatrix read_sketches_sparse(std::istream& in, int total_bits,
                                  const std::vector<int>& segment_bits,
                                  std::vector<std::string>* labels = nullptr);

// Packed binary format: little-endian header (magic, version, N, K, MAX,
// per-distance widths) followed by ceil(K/8) bytes per row.
void write_sketches_packed(const SketchMatrix& z, std::ostream& out);
SketchMatrix read_sketches_packed(std::istream& in);
std::size_t packed_file_size(std::size_t num_nodes, int total_bits, int num_segments);

void write_hyperplanes(const HyperplaneSet& planes, std::ostream& out);
HyperplaneSet read_hyperplanes(std::istream& in);

}  // namespace tgsketch
