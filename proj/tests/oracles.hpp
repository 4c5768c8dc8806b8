// Independent reference implementations used only by the tests. They share
// no code with the library beyond the graph container and GMP types, and
// favour obviousness over speed.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "nwmix/graph.hpp"
#include "nwmix/rational.hpp"
#include "nwmix/subtrees.hpp"

namespace oracle {

using nwmix::Rational;
using nwmix::UndirectedGraph;
using nwmix::Vertex;

// Dense lazy transition matrix with exact entries.
inline std::vector<std::vector<Rational>> dense_lazy_matrix(const UndirectedGraph& g) {
  const std::uint32_t n = g.n();
  std::vector<std::vector<Rational>> P(n, std::vector<Rational>(n, Rational(0)));
  for (Vertex x = 0; x < n; ++x) {
    P[x][x] += Rational(1, 2);
    for (Vertex y = 0; y < n; ++y)
      if (g.has_edge(x, y)) {
        Rational w(1, 2 * g.degree(x));
        w.canonicalize();
        P[x][y] += w;
      }
  }
  return P;
}

// Worst-start first t with TV(e_x P^t, pi) <= 1/4, by repeated dense
// vector-matrix products in exact arithmetic. Returns nullopt past `cap`.
inline std::optional<std::uint64_t> dense_mixing_time(const UndirectedGraph& g, std::uint64_t cap = 100000) {
  const std::uint32_t n = g.n();
  const auto P = dense_lazy_matrix(g);
  std::uint64_t two_m = 0;
  for (Vertex v = 0; v < n; ++v) two_m += g.degree(v);
  std::vector<Rational> pi(n);
  for (Vertex v = 0; v < n; ++v) {
    pi[v] = Rational(g.degree(v), two_m);
    pi[v].canonicalize();
  }
  const Rational quarter(1, 4);
  std::uint64_t worst = 0;
  for (Vertex x = 0; x < n; ++x) {
    std::vector<Rational> mu(n, Rational(0));
    mu[x] = 1;
    std::uint64_t t = 0;
    for (;;) {
      Rational tv = 0;
      for (Vertex y = 0; y < n; ++y) tv += abs(mu[y] - pi[y]);
      tv /= 2;
      if (tv <= quarter) break;
      if (++t > cap) return std::nullopt;
      std::vector<Rational> next(n, Rational(0));
      for (Vertex a = 0; a < n; ++a)
        if (mu[a] != 0)
          for (Vertex b = 0; b < n; ++b)
            if (P[a][b] != 0) next[b] += mu[a] * P[a][b];
      mu.swap(next);
    }
    worst = std::max(worst, t);
  }
  return worst;
}

inline bool mask_connected(const UndirectedGraph& g, std::uint32_t mask) {
  if (mask == 0) return false;
  const std::uint32_t start = static_cast<std::uint32_t>(std::countr_zero(mask));
  std::uint32_t seen = 1u << start, frontier = seen;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::uint32_t f = frontier; f; f &= f - 1) {
      const Vertex v = static_cast<Vertex>(std::countr_zero(f));
      for (Vertex w : g.neighbors(v)) next |= 1u << w;
    }
    next &= mask & ~seen;
    seen |= next;
    frontier = next;
  }
  return seen == mask;
}

struct MaskCut {
  std::uint64_t cut = 0;
  std::uint64_t volume = 0;
};

inline MaskCut mask_cut(const UndirectedGraph& g, std::uint32_t mask) {
  MaskCut out;
  for (std::uint32_t f = mask; f; f &= f - 1) {
    const Vertex v = static_cast<Vertex>(std::countr_zero(f));
    out.volume += g.degree(v);
    for (Vertex w : g.neighbors(v))
      if (!(mask >> w & 1u)) ++out.cut;
  }
  return out;
}

// Every connected vertex subset as a bitmask (n <= 24).
inline std::vector<std::uint32_t> all_connected_masks(const UndirectedGraph& g) {
  std::vector<std::uint32_t> out;
  const std::uint32_t full = g.n() >= 32 ? ~0u : (1u << g.n()) - 1;
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask)
    if (mask_connected(g, mask)) out.push_back(mask);
  return out;
}

// min cut/volume over connected S with lo <= e(S) <= hi, as an exact rational;
// nullopt when the window is empty.
inline std::optional<Rational> window_min(const UndirectedGraph& g, const std::vector<std::uint32_t>& masks,
                                          std::uint64_t lo, std::uint64_t hi, std::uint32_t size_cap = 32) {
  std::optional<Rational> best;
  for (std::uint32_t mask : masks) {
    if (static_cast<std::uint32_t>(std::popcount(mask)) > size_cap) continue;
    const MaskCut mc = mask_cut(g, mask);
    if (mc.volume < lo || mc.volume > hi) continue;
    Rational phi(mc.cut, mc.volume);
    phi.canonicalize();
    if (!best || phi < *best) best = phi;
  }
  return best;
}

// Sum of Phi^-2(2^-i), i = 1..ceil(log2 m), with windows [ceil(m/2^i), floor(m/2^(i-1))].
inline Rational fr_sum(const UndirectedGraph& g, std::vector<std::optional<Rational>>* per_scale = nullptr) {
  const auto masks = all_connected_masks(g);
  const std::uint64_t m = g.m();
  std::uint32_t scales = 0;
  while ((std::uint64_t{1} << scales) < m) ++scales;
  Rational sum = 0;
  for (std::uint32_t i = 1; i <= scales; ++i) {
    const std::uint64_t lo = (m + (std::uint64_t{1} << i) - 1) >> i;
    const std::uint64_t hi = m >> (i - 1);
    const auto phi = window_min(g, masks, lo, hi);
    if (per_scale) per_scale->push_back(phi);
    if (phi) sum += 1 / (*phi * *phi);
  }
  return sum;
}

// Connected j-sets containing v, by bitmask scan.
inline std::uint64_t count_sets_containing(const UndirectedGraph& g, Vertex v, std::uint32_t j) {
  std::uint64_t count = 0;
  const std::uint32_t full = (1u << g.n()) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask)
    if ((mask >> v & 1u) && static_cast<std::uint32_t>(std::popcount(mask)) == j && mask_connected(g, mask)) ++count;
  return count;
}

// Root subtrees of size j by listing every node subset that contains the root
// and is closed under taking parents. Trees up to ~22 nodes.
inline std::uint64_t subtrees_by_subsets(const nwmix::RootedTree& tree, std::uint32_t j) {
  const std::size_t n = tree.children.size();
  std::vector<std::size_t> parent(n, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (auto c : tree.children[u]) parent[c] = u;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); mask += 2) {  // root bit set
    if (static_cast<std::uint32_t>(std::popcount(mask)) != j) continue;
    bool closed = true;
    for (std::size_t u = 1; u < n && closed; ++u)
      if ((mask >> u & 1u) && !(mask >> parent[u] & 1u)) closed = false;
    if (closed) ++count;
  }
  return count;
}

// E[(B)_j] straight from a finite pmf.
inline Rational factorial_moment_from_pmf(const std::vector<Rational>& pmf, std::uint32_t j) {
  Rational q = 0;
  for (std::size_t m = j; m < pmf.size(); ++m) {
    nwmix::BigInt falling = 1;
    for (std::uint32_t i = 0; i < j; ++i) falling *= static_cast<unsigned long>(m - i);
    q += pmf[m] * Rational(falling);
  }
  return q;
}

inline std::vector<Rational> binomial_pmf(std::uint32_t n, const Rational& p) {
  std::vector<Rational> pmf(n + 1);
  for (std::uint32_t m = 0; m <= n; ++m) {
    Rational term(nwmix::binomial(n, m));
    for (std::uint32_t i = 0; i < m; ++i) term *= p;
    for (std::uint32_t i = m; i < n; ++i) term *= (1 - p);
    pmf[m] = term;
  }
  return pmf;
}

// Coefficients of F = z * sum_j w_j F^j by fixed-point iteration on
// truncated polynomials (a third route, unrelated to either library route).
inline std::vector<Rational> series_by_iteration(const std::vector<Rational>& w, std::uint32_t order) {
  std::vector<Rational> F(order + 1, Rational(0));
  for (std::uint32_t round = 0; round <= order; ++round) {
    std::vector<Rational> acc(order + 1, Rational(0)), power(order + 1, Rational(0));
    power[0] = 1;
    for (std::size_t j = 0; j < w.size() && j <= order; ++j) {
      for (std::uint32_t d = 0; d < order; ++d) acc[d + 1] += w[j] * power[d];
      std::vector<Rational> next(order + 1, Rational(0));
      for (std::uint32_t a = 0; a <= order; ++a)
        if (power[a] != 0)
          for (std::uint32_t b = 1; a + b <= order; ++b) next[a + b] += power[a] * F[b];
      power.swap(next);
    }
    F.swap(acc);
  }
  return F;
}

// Number of maximal runs of the subset on the n-cycle, by walking it.
inline std::uint32_t cyclic_runs(std::uint32_t n, std::uint32_t mask) {
  if (mask == 0) return 0;
  if (mask == (1u << n) - 1) return 1;
  std::uint32_t runs = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    const bool in = mask >> i & 1u;
    const bool prev = mask >> ((i + n - 1) % n) & 1u;
    if (in && !prev) ++runs;
  }
  return runs;
}

}  // namespace oracle
