#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nwmix/rational.hpp"

namespace nwmix {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Parameters of a Newman-Watts small world: the (n,k)-ring plus every
/// non-ring pair present independently with probability p = c/n.
struct GraphSpec {
  std::uint32_t n = 0;
  std::uint32_t k = 1;
  Rational c = 0;
  std::uint64_t seed = 0;

  // Requires n > 2k, k >= 1 and 0 <= c <= n.
  void validate() const;
  Rational p() const { return c / n; }

  // `n=..., k=..., c=..., seed=...` as key-value lines.
  std::string to_string() const;
  static GraphSpec parse(std::string_view text);

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

/// Simple undirected graph with sorted adjacency lists. Immutable once built.
class UndirectedGraph {
 public:
  UndirectedGraph() = default;

  /// Builds from an edge list. Rejects self-loops, duplicates and endpoints
  /// out of range. A nonzero `ring_k` tags the graph as containing the
  /// (n, ring_k)-ring, which is then verified.
  static UndirectedGraph from_edges(std::uint32_t n, std::span<const Edge> edges, std::uint32_t ring_k = 0);

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(adj_.size()); }
  std::uint64_t m() const noexcept { return m_; }
  std::uint32_t ring_k() const noexcept { return ring_k_; }

  std::span<const Vertex> neighbors(Vertex v) const noexcept { return adj_[v]; }
  std::uint32_t degree(Vertex v) const noexcept { return static_cast<std::uint32_t>(adj_[v].size()); }
  std::uint32_t min_degree() const noexcept;
  std::uint32_t max_degree() const noexcept;
  bool has_edge(Vertex u, Vertex v) const noexcept;

  /// All edges as (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;
  bool is_connected() const;

  friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
    return a.ring_k_ == b.ring_k_ && a.adj_ == b.adj_;
  }

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::uint64_t m_ = 0;
  std::uint32_t ring_k_ = 0;
};

/// Vertices at cyclic distance <= k are adjacent. Requires n > 2k >= 2.
UndirectedGraph build_ring(std::uint32_t n, std::uint32_t k);

UndirectedGraph complete_graph(std::uint32_t n);

/// Samples H_{n,k,p}. Each row u draws its shortcuts (u, v), v > u, from a
/// stream keyed by (seed, u) by geometric skipping over the contiguous
/// non-ring range, so the result is a pure function of the spec.
UndirectedGraph sample_small_world(const GraphSpec& spec);

/// Number of non-ring pairs of the (n,k)-ring: n(n-1)/2 - nk.
std::uint64_t non_ring_pair_count(std::uint32_t n, std::uint32_t k);

/// Contraction of R consecutive vertices into one block.
struct BlowUpMap {
  std::uint32_t group_size = 0;
  std::uint32_t base_n = 0;
  UndirectedGraph auxiliary;

  std::uint32_t block_count() const noexcept { return base_n / group_size; }
  std::uint32_t block_of(Vertex v) const noexcept { return v / group_size; }
};

/// Requires R | n and R > ring_k of g.
BlowUpMap blow_up(const UndirectedGraph& g, std::uint32_t group_size);

struct BlownUpSet {
  std::vector<std::uint32_t> blocks;  // S'
  std::vector<Vertex> vertices;       // S+
};

BlownUpSet blow_up_set(const BlowUpMap& map, std::span<const Vertex> set);

// Edge-list text format: "n k" header then "u v" lines, u < v, sorted.
void write_graph(const UndirectedGraph& g, std::ostream& out);
void write_graph(const UndirectedGraph& g, const std::string& path);
UndirectedGraph read_graph(std::istream& in);
UndirectedGraph read_graph(const std::string& path);

}  // namespace nwmix
