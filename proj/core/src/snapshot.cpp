#include "blgc/snapshot.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <string>

#include "blgc/errors.hpp"

namespace blgc {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::size_t kHeaderSize = kSnapshotMagic.size() + 4 * 8;

class ChunkWriter {
 public:
  explicit ChunkWriter(const ByteSink& sink) : sink_(sink) { buf_.reserve(kChunk); }
  ~ChunkWriter() = default;

  void put_u64(std::uint64_t x) {
    for (int k = 0; k < 8; ++k) buf_.push_back(static_cast<std::uint8_t>(x >> (8 * k)));
    if (buf_.size() >= kChunk - 8) flush();
  }
  void put_f64(double x) { put_u64(std::bit_cast<std::uint64_t>(x)); }
  void put_bytes(std::string_view s) {
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void flush() {
    if (!buf_.empty()) sink_(buf_);
    buf_.clear();
  }

 private:
  const ByteSink& sink_;
  std::vector<std::uint8_t> buf_;
};

std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint64_t x = 0;
  for (int k = 0; k < 8; ++k) x |= static_cast<std::uint64_t>(bytes[offset + k]) << (8 * k);
  return x;
}

}  // namespace

void stream_snapshot(const GraphState& g, const ByteSink& sink) {
  ChunkWriter w(sink);
  w.put_bytes(kSnapshotMagic);
  w.put_u64(g.node_count());
  w.put_u64(g.dim());
  w.put_u64(g.radius());
  w.put_u64(g.cap());
  for (double x : g.states()) w.put_f64(x);
  for (const Edge& e : g.edges()) {
    w.put_u64(e.u);
    w.put_u64(e.v);
  }
  w.flush();
}

std::vector<std::uint8_t> encode_snapshot(const GraphState& g) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + g.states().size() * 8 + g.edge_count() * 16);
  stream_snapshot(g, [&](std::span<const std::uint8_t> chunk) {
    out.insert(out.end(), chunk.begin(), chunk.end());
  });
  return out;
}

GraphState decode_snapshot(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize ||
      !std::equal(kSnapshotMagic.begin(), kSnapshotMagic.end(), bytes.begin())) {
    throw FormatError("snapshot: missing BLGC1 header");
  }
  std::size_t off = kSnapshotMagic.size();
  const std::uint64_t m = get_u64(bytes, off);
  const std::uint64_t d = get_u64(bytes, off + 8);
  const std::uint64_t r = get_u64(bytes, off + 16);
  const std::uint64_t cap = get_u64(bytes, off + 24);
  off += 32;
  if (d == 0 || m > (bytes.size() - off) / 8 / d) {
    throw FormatError("snapshot: state block truncated (M = " + std::to_string(m) +
                      ", d = " + std::to_string(d) + ")");
  }
  const std::size_t state_bytes = static_cast<std::size_t>(m * d * 8);
  const std::size_t edge_bytes = bytes.size() - off - state_bytes;
  if (edge_bytes % 16 != 0) throw FormatError("snapshot: trailing partial edge record");

  std::vector<Edge> edges(edge_bytes / 16);
  const std::size_t edge_off = off + state_bytes;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::uint64_t u = get_u64(bytes, edge_off + 16 * k);
    const std::uint64_t v = get_u64(bytes, edge_off + 16 * k + 8);
    if (u >= m || v >= m) throw FormatError("snapshot: edge endpoint out of range");
    edges[k] = Edge{static_cast<NodeId>(u), static_cast<NodeId>(v)};
  }

  GraphState g(static_cast<std::size_t>(m), edges,
               Locality{static_cast<std::size_t>(r), static_cast<std::size_t>(cap)},
               static_cast<std::size_t>(d));
  std::vector<double> block(d);
  for (std::uint64_t i = 0; i < m; ++i) {
    for (std::uint64_t k = 0; k < d; ++k) {
      block[k] = std::bit_cast<double>(get_u64(bytes, off + 8 * (i * d + k)));
    }
    g.set_state(static_cast<NodeId>(i), block);
  }
  return g;
}

void write_snapshot(const GraphState& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  stream_snapshot(g, [&](std::span<const std::uint8_t> chunk) {
    out.write(reinterpret_cast<const char*>(chunk.data()),
              static_cast<std::streamsize>(chunk.size()));
  });
  if (!out) throw IoError("write failed for " + path.string());
}

GraphState read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

}  // namespace blgc
