#include "nwmix/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nwmix/error.hpp"
#include "nwmix/rng.hpp"

namespace nwmix {

void GraphSpec::validate() const {
  if (k < 1) throw ValidationError("ring half-width k must be >= 1");
  if (n <= 2 * static_cast<std::uint64_t>(k))
    throw ValidationError("degenerate ring: need n > 2k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  if (c < 0 || c > n) throw ValidationError("shortcut intensity c must satisfy 0 <= c <= n");
}

std::string GraphSpec::to_string() const {
  std::ostringstream out;
  out << "n=" << n << "\nk=" << k << "\nc=" << nwmix::to_string(c) << "\nseed=" << seed << "\n";
  return out.str();
}

GraphSpec GraphSpec::parse(std::string_view text) {
  GraphSpec spec;
  bool seen[4] = {false, false, false, false};
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  auto parse_uint = [&](const std::string& value, std::uint64_t max) {
    std::size_t used = 0;
    unsigned long long parsed = 0;
    try {
      parsed = std::stoull(value, &used);
    } catch (const std::exception&) {
      throw ParseError(line_no, "expected an unsigned integer, got '" + value + "'");
    }
    if (used != value.size() || value.front() == '-' || parsed > max)
      throw ParseError(line_no, "expected an unsigned integer, got '" + value + "'");
    return static_cast<std::uint64_t>(parsed);
  };
  while (std::getline(in, line)) {
    ++line_no;
    // Accept both one-per-line and comma-separated "n=..., k=..." forms.
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto first = field.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      const auto last = field.find_last_not_of(" \t\r");
      field = field.substr(first, last - first + 1);
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw ParseError(line_no, "expected key=value, got '" + field + "'");
      auto key = field.substr(0, eq);
      auto value = field.substr(eq + 1);
      key.erase(key.find_last_not_of(" \t") + 1);
      value.erase(0, value.find_first_not_of(" \t"));
      if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
      if (key == "n") {
        spec.n = static_cast<std::uint32_t>(parse_uint(value, UINT32_MAX));
        seen[0] = true;
      } else if (key == "k") {
        spec.k = static_cast<std::uint32_t>(parse_uint(value, UINT32_MAX));
        seen[1] = true;
      } else if (key == "c") {
        try {
          spec.c = parse_rational(value);
        } catch (const ValidationError& e) {
          throw ParseError(line_no, e.what());
        }
        seen[2] = true;
      } else if (key == "seed") {
        spec.seed = parse_uint(value, UINT64_MAX);
        seen[3] = true;
      } else {
        throw ParseError(line_no, "unknown key '" + key + "'");
      }
    }
  }
  const char* names[4] = {"n", "k", "c", "seed"};
  for (int i = 0; i < 4; ++i)
    if (!seen[i]) throw ParseError(0, std::string("missing key '") + names[i] + "'");
  spec.validate();
  return spec;
}

UndirectedGraph UndirectedGraph::from_edges(std::uint32_t n, std::span<const Edge> edges, std::uint32_t ring_k) {
  UndirectedGraph g;
  std::vector<std::uint32_t> deg(n, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n)
      throw ValidationError("edge {" + std::to_string(u) + "," + std::to_string(v) + "} has an endpoint >= n=" +
                            std::to_string(n));
    if (u == v) throw ValidationError("self-loop at vertex " + std::to_string(u));
    ++deg[u];
    ++deg[v];
  }
  g.adj_.resize(n);
  for (Vertex v = 0; v < n; ++v) g.adj_[v].reserve(deg[v]);
  for (const auto& [u, v] : edges) {
    g.adj_[u].push_back(v);
    g.adj_[v].push_back(u);
  }
  for (Vertex v = 0; v < n; ++v) {
    auto& list = g.adj_[v];
    std::sort(list.begin(), list.end());
    if (auto dup = std::adjacent_find(list.begin(), list.end()); dup != list.end())
      throw ValidationError("duplicate edge {" + std::to_string(std::min(v, *dup)) + "," +
                            std::to_string(std::max(v, *dup)) + "}");
  }
  g.m_ = edges.size();
  g.ring_k_ = ring_k;
  if (ring_k > 0) {
    if (n <= 2 * static_cast<std::uint64_t>(ring_k)) throw ValidationError("ring tag k requires n > 2k");
    for (Vertex v = 0; v < n; ++v)
      for (std::uint32_t d = 1; d <= ring_k; ++d)
        if (!g.has_edge(v, (v + d) % n))
          throw ValidationError("graph tagged k=" + std::to_string(ring_k) + " is missing ring edge {" +
                                std::to_string(v) + "," + std::to_string((v + d) % n) + "}");
  }
  return g;
}

std::uint32_t UndirectedGraph::min_degree() const noexcept {
  std::uint32_t best = adj_.empty() ? 0 : UINT32_MAX;
  for (const auto& list : adj_) best = std::min(best, static_cast<std::uint32_t>(list.size()));
  return best;
}

std::uint32_t UndirectedGraph::max_degree() const noexcept {
  std::uint32_t best = 0;
  for (const auto& list : adj_) best = std::max(best, static_cast<std::uint32_t>(list.size()));
  return best;
}

bool UndirectedGraph::has_edge(Vertex u, Vertex v) const noexcept {
  if (u >= n() || v >= n()) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n(); ++u)
    for (Vertex v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

bool UndirectedGraph::is_connected() const {
  if (adj_.empty()) return true;
  std::vector<char> seen(n(), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : adj_[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n();
}

namespace {

void append_ring_edges(std::uint32_t n, std::uint32_t k, std::vector<Edge>& edges) {
  for (Vertex i = 0; i < n; ++i)
    for (std::uint32_t d = 1; d <= k; ++d) {
      const Vertex j = (i + d) % n;
      edges.emplace_back(std::min(i, j), std::max(i, j));
    }
}

}  // namespace

UndirectedGraph build_ring(std::uint32_t n, std::uint32_t k) {
  if (k < 1) throw ValidationError("ring half-width k must be >= 1");
  if (n <= 2 * static_cast<std::uint64_t>(k))
    throw ValidationError("degenerate ring: need n > 2k (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ")");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k);
  append_ring_edges(n, k, edges);
  return UndirectedGraph::from_edges(n, edges, k);
}

UndirectedGraph complete_graph(std::uint32_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return UndirectedGraph::from_edges(n, edges);
}

std::uint64_t non_ring_pair_count(std::uint32_t n, std::uint32_t k) {
  return static_cast<std::uint64_t>(n) * (n - 1) / 2 - static_cast<std::uint64_t>(n) * k;
}

UndirectedGraph sample_small_world(const GraphSpec& spec) {
  spec.validate();
  const std::uint32_t n = spec.n;
  const std::uint32_t k = spec.k;
  const double p = spec.p().get_d();

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * k + static_cast<std::size_t>(spec.c.get_d() * n / 2 * 1.2 + 16));
  append_ring_edges(n, k, edges);

  if (p > 0) {
    const bool take_all = spec.c == n;
    const double log_q = std::log1p(-p);
    for (Vertex u = 0; u + k + 1 < n; ++u) {
      // Non-ring partners v > u form the contiguous range [u+k+1, u+n-k-1].
      const std::uint64_t lo = static_cast<std::uint64_t>(u) + k + 1;
      const std::uint64_t hi = std::min<std::uint64_t>(n - 1, static_cast<std::uint64_t>(u) + n - k - 1);
      if (lo > hi) continue;
      if (take_all) {
        for (std::uint64_t v = lo; v <= hi; ++v) edges.emplace_back(u, static_cast<Vertex>(v));
        continue;
      }
      Rng rng(derive_seed(spec.seed, {u}));
      std::uint64_t pos = lo - 1;
      for (;;) {
        const double skip = std::floor(std::log(rng.uniform_open0()) / log_q);
        if (skip >= static_cast<double>(hi - pos)) break;
        pos += static_cast<std::uint64_t>(skip) + 1;
        edges.emplace_back(u, static_cast<Vertex>(pos));
      }
    }
  }
  return UndirectedGraph::from_edges(n, edges, k);
}

BlowUpMap blow_up(const UndirectedGraph& g, std::uint32_t group_size) {
  const std::uint32_t n = g.n();
  if (group_size == 0 || n % group_size != 0)
    throw ValidationError("group size R=" + std::to_string(group_size) + " must divide n=" + std::to_string(n));
  if (group_size <= g.ring_k())
    throw ValidationError("group size R=" + std::to_string(group_size) + " must exceed the ring half-width k=" +
                          std::to_string(g.ring_k()));
  BlowUpMap map;
  map.group_size = group_size;
  map.base_n = n;
  const std::uint32_t blocks = n / group_size;

  std::vector<Edge> aux;
  for (Vertex u = 0; u < n; ++u) {
    const std::uint32_t bu = u / group_size;
    for (Vertex v : g.neighbors(u)) {
      const std::uint32_t bv = v / group_size;
      if (bu < bv) aux.emplace_back(bu, bv);
    }
  }
  std::sort(aux.begin(), aux.end());
  aux.erase(std::unique(aux.begin(), aux.end()), aux.end());

  // The auxiliary graph is a ring iff the base ring survives contraction and
  // has more than two blocks; otherwise leave it untagged.
  const bool ring_tag = g.ring_k() > 0 && blocks > 2;
  map.auxiliary = UndirectedGraph::from_edges(blocks, aux, ring_tag ? 1 : 0);
  return map;
}

BlownUpSet blow_up_set(const BlowUpMap& map, std::span<const Vertex> set) {
  BlownUpSet out;
  std::vector<char> hit(map.block_count(), 0);
  for (Vertex v : set) {
    if (v >= map.base_n) throw ValidationError("vertex " + std::to_string(v) + " outside the base graph");
    hit[map.block_of(v)] = 1;
  }
  for (std::uint32_t b = 0; b < map.block_count(); ++b) {
    if (!hit[b]) continue;
    out.blocks.push_back(b);
    for (std::uint32_t r = 0; r < map.group_size; ++r) out.vertices.push_back(b * map.group_size + r);
  }
  return out;
}

}  // namespace nwmix
