#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwmix/graph.hpp"
#include "nwmix/rational.hpp"

namespace nwmix {

/// e(S,S^c), e(S,S) and e(S) for a vertex set; volume = 2 internal + cut.
struct CutStats {
  std::vector<Vertex> set;  // sorted
  std::uint64_t cut = 0;
  std::uint64_t internal = 0;
  std::uint64_t volume = 0;

  double phi() const { return static_cast<double>(cut) / static_cast<double>(volume); }
  Rational phi_exact() const { return make_rational(cut, volume); }
};

/// Exact counts by adjacency scan. Throws on an empty set or a vertex out of range.
CutStats cut_stats(const UndirectedGraph& g, std::span<const Vertex> set);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

struct ConnectedSetQuery {
  std::uint32_t min_size = 1;
  std::uint32_t max_size = 0;  // 0 = n
  std::optional<Vertex> containing;
  std::uint64_t max_volume = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t budget = kDefaultEnumerationBudget;  // sets visited, including ones below min_size
};

struct ConnectedSetView {
  std::span<const Vertex> members;  // in insertion order, not sorted
  std::uint64_t volume;
  std::uint64_t cut;
};

/// Calls `visit` once for every connected vertex set matching the query.
/// Sets are grown from a root by include/exclude branching over boundary
/// candidates, so no set is produced twice and nothing is memoized. Without
/// `containing`, the root is the minimum vertex of each set. Throws
/// BudgetExceeded rather than returning a truncated enumeration.
void visit_connected_sets(const UndirectedGraph& g, const ConnectedSetQuery& query,
                          const std::function<void(const ConnectedSetView&)>& visit);

/// Every connected set of exactly `size` vertices (containing `v` if given), each sorted.
std::vector<std::vector<Vertex>> connected_sets(const UndirectedGraph& g, std::uint32_t size,
                                                std::optional<Vertex> containing = std::nullopt,
                                                std::uint64_t budget = kDefaultEnumerationBudget);

std::uint64_t count_connected_sets(const UndirectedGraph& g, std::uint32_t size,
                                   std::optional<Vertex> containing = std::nullopt,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

enum class SearchMode { exact, local_search };

std::string to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

struct LocalSearchOptions {
  std::uint64_t seed = 0;
  std::uint32_t restarts = 32;
  std::uint32_t iterations = 4000;
};

struct ConductanceOptions {
  SearchMode mode = SearchMode::exact;
  std::uint64_t budget = kDefaultEnumerationBudget;
  LocalSearchOptions local;
  unsigned threads = 0;
};

/// Minimum conductance over connected sets in a closed volume window.
struct WindowMinimum {
  std::uint64_t volume_lo = 0;
  std::uint64_t volume_hi = 0;
  bool found = false;  // false: no connected set fits, Phi := +inf
  std::uint64_t cut = 0;
  std::uint64_t volume = 0;
  std::vector<Vertex> witness;  // lexicographically smallest minimizer (exact mode)
  bool certified = true;

  double phi() const;
  // Phi^-2 with the +inf => 0 convention.
  Rational inverse_square() const;
};

/// Searches connected S with volume_lo <= e(S) <= volume_hi and |S| <= size_cap.
/// Exact mode throws BudgetExceeded (suggesting local search) when the
/// enumeration is too large; local-search results are upper bounds and are
/// flagged uncertified.
WindowMinimum min_conductance_in_window(const UndirectedGraph& g, std::uint64_t volume_lo, std::uint64_t volume_hi,
                                        std::uint32_t size_cap, const ConductanceOptions& options);

struct ScaleEntry {
  std::uint32_t i = 0;  // 0 when x is not dyadic
  Rational x;
  WindowMinimum min;
};

/// Phi(x): window x|E| <= e(S) <= 2x|E| for x in (0, 1/2].
ScaleEntry phi_at_scale(const UndirectedGraph& g, const Rational& x, const ConductanceOptions& options);

/// The restricted profile used for the upper bound: sets with |S| <= size_cap
/// and x n (c/2 + k)/2 <= e(S) <= 4 x n (c/2 + k).
ScaleEntry phi0_at_scale(const UndirectedGraph& g, const Rational& x, const Rational& c, std::uint32_t k,
                         std::uint32_t size_cap, const ConductanceOptions& options);

/// Smallest i with 2^i >= m.
std::uint32_t ceil_log2(std::uint64_t m);

struct ScaleProfile {
  std::uint64_t m = 0;
  std::vector<ScaleEntry> entries;  // i = 1 .. ceil(log2 m)

  /// Columns: i, x, phi, volume_lo, volume_hi, certified, witness_size.
  std::string to_csv() const;
};

ScaleProfile scale_profile(const UndirectedGraph& g, const ConductanceOptions& options);

struct FrResult {
  Rational sum;  // exact sum of Phi^-2(2^-i) over the scales found
  bool lower_estimate = false;  // true when any scale came from local search
  ScaleProfile profile;

  std::string to_json() const;
};

/// Sum over i = 1..ceil(log2 m) of Phi^-2(2^-i), empty windows contributing 0.
FrResult fr_bound(const UndirectedGraph& g, const ConductanceOptions& options);

/// Smallest e(S,S^c)/|S| over connected S with |S| >= min_size (exact enumeration).
struct ExpansionFloor {
  bool found = false;
  Rational ratio;
  std::vector<Vertex> witness;
};
ExpansionFloor min_cut_per_vertex(const UndirectedGraph& g, std::uint32_t min_size, std::uint32_t max_size,
                                  std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace nwmix
