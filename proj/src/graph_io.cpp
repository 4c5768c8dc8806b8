#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>

#include "nwmix/error.hpp"
#include "nwmix/graph.hpp"

namespace nwmix {

void write_graph(const UndirectedGraph& g, std::ostream& out) {
  out << g.n() << ' ' << g.ring_k() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_graph(const UndirectedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_graph(g, out);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

namespace {

// Splits "a b" into two unsigned integers; anything else is a parse error.
std::pair<std::uint64_t, std::uint64_t> parse_pair(const std::string& line, std::size_t line_no) {
  const char* p = line.data();
  const char* end = p + line.size();
  if (end != p && end[-1] == '\r') --end;
  std::uint64_t values[2];
  for (int i = 0; i < 2; ++i) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    auto [next, ec] = std::from_chars(p, end, values[i]);
    if (ec != std::errc() || next == p) throw ParseError(line_no, "expected two unsigned integers, got '" + line + "'");
    p = next;
  }
  while (p < end && (*p == ' ' || *p == '\t')) ++p;
  if (p != end) throw ParseError(line_no, "trailing characters in '" + line + "'");
  return {values[0], values[1]};
}

}  // namespace

UndirectedGraph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing 'n k' header");
  const auto [n64, k64] = parse_pair(line, line_no);
  if (n64 > UINT32_MAX || k64 > UINT32_MAX) throw ParseError(1, "header values out of range");
  const auto n = static_cast<std::uint32_t>(n64);

  std::vector<Edge> edges;
  std::unordered_map<std::uint64_t, std::size_t> first_seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto [u, v] = parse_pair(line, line_no);
    if (u >= n || v >= n)
      throw ValidationError("line " + std::to_string(line_no) + ": endpoint out of range for n=" + std::to_string(n));
    if (u == v) throw ValidationError("line " + std::to_string(line_no) + ": self-loop");
    if (u > v)
      throw ValidationError("line " + std::to_string(line_no) + ": edge must be written with u < v, got '" + line + "'");
    const std::uint64_t key = (u << 32) | v;
    if (auto [it, fresh] = first_seen.emplace(key, line_no); !fresh)
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate edge (first on line " +
                            std::to_string(it->second) + ")");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return UndirectedGraph::from_edges(n, edges, static_cast<std::uint32_t>(k64));
}

UndirectedGraph read_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return read_graph(in);
}

}  // namespace nwmix
