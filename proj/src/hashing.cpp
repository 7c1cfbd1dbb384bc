#include "tgsketch/hashing.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "tgsketch/errors.hpp"
#include "tgsketch/rng.hpp"

namespace tgsketch {

namespace {

constexpr char kSketchMagic[4] = {'T', 'G', 'S', 'K'};
constexpr char kPlaneMagic[4] = {'T', 'G', 'P', 'L'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint64_t kPlaneSalt = 0x706c616eULL;  // "plan"

template <typename T>
void put_le(std::ostream& out, T value) {
  std::uint8_t buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  std::uint8_t buf[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(buf), sizeof(T)))
    throw validation_error("truncated binary file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

std::vector<int> split_sketch_bits(int total_bits, int max_distance) {
  if (total_bits < 1) throw validation_error("sketch width must be >= 1");
  if (max_distance < 1) throw validation_error("max temporal distance must be >= 1");
  if (max_distance > total_bits)
    throw validation_error("sketch width smaller than the number of distance segments");
  std::vector<int> bits(max_distance, total_bits / max_distance);
  const int rem = total_bits % max_distance;
  for (int i = 0; i < rem; ++i) bits[i]++;
  return bits;
}

int HyperplaneSet::total_bits() const {
  return std::accumulate(segment_bits.begin(), segment_bits.end(), 0);
}

std::vector<std::int8_t> generate_hyperplane_segment(std::size_t dim, int num_planes,
                                                     std::uint64_t seed) {
  if (dim < 1) throw validation_error("hyperplane dimension must be >= 1");
  if (num_planes < 1) throw validation_error("plane count must be >= 1");
  std::vector<std::int8_t> planes(static_cast<std::size_t>(num_planes) * dim);
  rng_engine rng(seed);
  for (auto& v : planes) v = (rng() & 1u) ? std::int8_t{1} : std::int8_t{-1};
  return planes;
}

HyperplaneSet generate_hyperplanes(std::size_t dim, const std::vector<int>& segment_bits,
                                   std::uint64_t seed) {
  HyperplaneSet set;
  set.dim = dim;
  set.seed = seed;
  set.segment_bits = segment_bits;
  set.segments.reserve(segment_bits.size());
  for (std::size_t s = 0; s < segment_bits.size(); ++s)
    set.segments.push_back(
        generate_hyperplane_segment(dim, segment_bits[s], derive_seed(seed, s, kPlaneSalt)));
  return set;
}

namespace {

template <typename Value, typename Acc>
std::vector<std::uint8_t> simhash_impl(std::span<const Value> histogram,
                                       std::span<const std::int8_t> planes, int num_planes) {
  const std::size_t dim = histogram.size();
  if (planes.size() != dim * static_cast<std::size_t>(num_planes))
    throw validation_error("histogram length does not match hyperplane dimension");
  std::vector<std::uint8_t> bits(num_planes);
  for (int i = 0; i < num_planes; ++i) {
    const std::int8_t* r = planes.data() + static_cast<std::size_t>(i) * dim;
    Acc dot = 0;
    for (std::size_t k = 0; k < dim; ++k) dot += static_cast<Acc>(histogram[k]) * r[k];
    bits[i] = dot > 0 ? 1 : 0;
  }
  return bits;
}

}  // namespace

std::vector<std::uint8_t> simhash(std::span<const std::uint32_t> histogram,
                                  std::span<const std::int8_t> planes, int num_planes) {
  return simhash_impl<std::uint32_t, std::int64_t>(histogram, planes, num_planes);
}

std::vector<std::uint8_t> simhash(std::span<const double> histogram,
                                  std::span<const std::int8_t> planes, int num_planes) {
  return simhash_impl<double, double>(histogram, planes, num_planes);
}

SketchMatrix::SketchMatrix(std::size_t num_nodes, std::vector<int> segment_bits)
    : num_nodes_(num_nodes), segment_bits_(std::move(segment_bits)) {
  total_bits_ = std::accumulate(segment_bits_.begin(), segment_bits_.end(), 0);
  bytes_per_row_ = (static_cast<std::size_t>(total_bits_) + 7) / 8;
  data_.assign(num_nodes_ * bytes_per_row_, 0);
}

int SketchMatrix::segment_offset(std::size_t segment) const {
  int off = 0;
  for (std::size_t s = 0; s < segment; ++s) off += segment_bits_[s];
  return off;
}

SketchMatrix assemble_embeddings(const HistogramMatrix& hists, const HyperplaneSet& planes) {
  if (hists.dim != planes.dim)
    throw validation_error("histogram dimensionality does not match hyperplanes");
  if (static_cast<std::size_t>(hists.max_distance) != planes.segment_bits.size())
    throw validation_error("distance count does not match hyperplane segments");

  SketchMatrix z(hists.num_nodes, planes.segment_bits);
#pragma omp parallel for schedule(static)
  for (std::int64_t u = 0; u < static_cast<std::int64_t>(hists.num_nodes); ++u) {
    int offset = 0;
    for (int dt = 1; dt <= hists.max_distance; ++dt) {
      const int k_dt = planes.segment_bits[dt - 1];
      auto bits = simhash(hists.row(static_cast<node_id>(u), dt), planes.segments[dt - 1], k_dt);
      for (int i = 0; i < k_dt; ++i)
        if (bits[i]) z.set(static_cast<node_id>(u), offset + i, true);
      offset += k_dt;
    }
  }
  return z;
}

double estimate_similarity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                           int num_bits) {
  if (a.size() != b.size()) throw validation_error("sketch rows differ in length");
  // Padding bits are zero in both rows, so they never disagree.
  std::uint64_t mismatches = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    mismatches += std::popcount(static_cast<unsigned>(a[i] ^ b[i]));
  return 1.0 - static_cast<double>(mismatches) / static_cast<double>(num_bits);
}

double estimate_similarity(const SketchMatrix& z, node_id u, node_id v) {
  return estimate_similarity(z.row(u), z.row(v), z.total_bits());
}

void write_sketches_sparse(const SketchMatrix& z, const std::vector<std::string>& labels,
                           std::ostream& out) {
  for (node_id u = 0; u < z.num_nodes(); ++u) {
    out << labels[u] << ':';
    for (int k = 0; k < z.total_bits(); ++k)
      if (z.get(u, k)) out << ' ' << k;
    out << '\n';
  }
}

SketchMatrix read_sketches_sparse(std::istream& in, int total_bits,
                                  const std::vector<int>& segment_bits,
                                  std::vector<std::string>* labels) {
  std::vector<std::pair<std::string, std::vector<int>>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw parse_error(line_no, "expected 'label: bits'");
    std::vector<int> set_bits;
    std::istringstream rest(line.substr(colon + 1));
    int k;
    while (rest >> k) {
      if (k < 0 || k >= total_bits) throw parse_error(line_no, "bit index out of range");
      set_bits.push_back(k);
    }
    rows.emplace_back(line.substr(0, colon), std::move(set_bits));
  }
  SketchMatrix z(rows.size(), segment_bits);
  if (z.total_bits() != total_bits) throw validation_error("segment widths do not sum to K");
  if (labels) labels->clear();
  for (node_id u = 0; u < rows.size(); ++u) {
    if (labels) labels->push_back(rows[u].first);
    for (int k : rows[u].second) z.set(u, k, true);
  }
  return z;
}

std::size_t packed_file_size(std::size_t num_nodes, int total_bits, int num_segments) {
  const std::size_t header = 4 + 4 + 8 + 4 + 4 + 4 * static_cast<std::size_t>(num_segments);
  return header + num_nodes * ((static_cast<std::size_t>(total_bits) + 7) / 8);
}

void write_sketches_packed(const SketchMatrix& z, std::ostream& out) {
  out.write(kSketchMagic, 4);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, z.num_nodes());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(z.total_bits()));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(z.segment_bits().size()));
  for (int bits : z.segment_bits()) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(bits));
  for (node_id u = 0; u < z.num_nodes(); ++u) {
    auto row = z.row(u);
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw std::runtime_error("failed writing packed sketches");
}

SketchMatrix read_sketches_packed(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kSketchMagic, 4) != 0)
    throw validation_error("not a packed sketch file");
  if (get_le<std::uint32_t>(in) != kFormatVersion)
    throw validation_error("unsupported sketch file version");
  const std::uint64_t n = get_le<std::uint64_t>(in);
  const std::uint32_t k = get_le<std::uint32_t>(in);
  const std::uint32_t segments = get_le<std::uint32_t>(in);
  std::vector<int> segment_bits(segments);
  std::uint32_t sum = 0;
  for (auto& bits : segment_bits) {
    bits = static_cast<int>(get_le<std::uint32_t>(in));
    sum += static_cast<std::uint32_t>(bits);
  }
  if (sum != k) throw validation_error("corrupt sketch header: segment widths do not sum to K");
  SketchMatrix z(n, segment_bits);
  for (node_id u = 0; u < z.num_nodes(); ++u) {
    auto row = z.row(u);
    if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size())))
      throw validation_error("truncated packed sketch payload");
  }
  return z;
}

void write_hyperplanes(const HyperplaneSet& planes, std::ostream& out) {
  out.write(kPlaneMagic, 4);
  put_le<std::uint32_t>(out, kFormatVersion);
  put_le<std::uint64_t>(out, planes.seed);
  put_le<std::uint64_t>(out, planes.dim);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(planes.segment_bits.size()));
  for (int bits : planes.segment_bits) put_le<std::uint32_t>(out, static_cast<std::uint32_t>(bits));
  for (const auto& segment : planes.segments) {
    // Sign bits packed 8 per byte, +1 encoded as 1.
    std::uint8_t byte = 0;
    int fill = 0;
    for (std::int8_t v : segment) {
      byte = static_cast<std::uint8_t>((byte << 1) | (v > 0 ? 1u : 0u));
      if (++fill == 8) {
        out.put(static_cast<char>(byte));
        byte = 0;
        fill = 0;
      }
    }
    if (fill) out.put(static_cast<char>(byte << (8 - fill)));
  }
  if (!out) throw std::runtime_error("failed writing hyperplanes");
}

HyperplaneSet read_hyperplanes(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kPlaneMagic, 4) != 0)
    throw validation_error("not a hyperplane file");
  if (get_le<std::uint32_t>(in) != kFormatVersion)
    throw validation_error("unsupported hyperplane file version");
  HyperplaneSet planes;
  planes.seed = get_le<std::uint64_t>(in);
  planes.dim = get_le<std::uint64_t>(in);
  const std::uint32_t segments = get_le<std::uint32_t>(in);
  planes.segment_bits.resize(segments);
  for (auto& bits : planes.segment_bits) bits = static_cast<int>(get_le<std::uint32_t>(in));
  for (int bits : planes.segment_bits) {
    const std::size_t count = static_cast<std::size_t>(bits) * planes.dim;
    std::vector<std::int8_t> segment(count);
    std::size_t i = 0;
    while (i < count) {
      int byte = in.get();
      if (byte == EOF) throw validation_error("truncated hyperplane payload");
      for (int b = 7; b >= 0 && i < count; --b, ++i)
        segment[i] = ((byte >> b) & 1) ? std::int8_t{1} : std::int8_t{-1};
    }
    planes.segments.push_back(std::move(segment));
  }
  return planes;
}

}  // namespace tgsketch
