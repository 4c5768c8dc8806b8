#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nwmix/conductance.hpp"
#include "nwmix/graph.hpp"
#include "nwmix/rational.hpp"

namespace nwmix {

// Galton-Watson offspring laws with exact rational parameters.
struct PoissonLaw {
  Rational c;
};
struct BinomialLaw {
  std::uint32_t n;
  Rational p;
};
// Bin(n, p) + ell: the degree law of a small-world vertex when ell = 2k.
struct BinomialPlusLaw {
  std::uint32_t n;
  Rational p;
  std::uint32_t ell;
};
struct DeterministicLaw {
  std::uint32_t d;
};
// pmf[m] = P(B = m), finite support.
struct ExplicitLaw {
  std::vector<Rational> pmf;
};

using OffspringLaw = std::variant<PoissonLaw, BinomialLaw, BinomialPlusLaw, DeterministicLaw, ExplicitLaw>;

void validate(const OffspringLaw& law);
std::string describe(const OffspringLaw& law);

/// "poisson:7/2", "binomial:50:1/10", "binomial-plus:50:1/10:2",
/// "deterministic:3", "explicit:1/2,0,1/2".
OffspringLaw parse_law(const std::string& text);

/// A constant C with q_j <= C^j for every j: c, np, np + ell, d, or the
/// largest support point.
Rational growth_constant(const OffspringLaw& law);

/// q_0 .. q_J, q_j = E[(B)_j].
std::vector<Rational> factorial_moments(const OffspringLaw& law, std::uint32_t order);

/// mu_0 .. mu_J from F(z) = z Q(F(z)), one coefficient at a time:
/// mu_{r+1} = sum_{j <= r} q_j [z^r] F(z)^j.
std::vector<Rational> mu_by_functional_equation(std::span<const Rational> q, std::uint32_t order);

/// mu_0 .. mu_J with mu_j = (1/j) [z^{j-1}] Q(z)^j.
std::vector<Rational> mu_by_lagrange(std::span<const Rational> q, std::uint32_t order);

struct CoeffSeq {
  std::vector<Rational> q;
  std::vector<Rational> mu;
};

/// Series F = z Q(F) with Q built from the ordered moments q_j. This counts
/// embeddings of plane trees, i.e. every root subtree weighted by the product
/// of its child-count factorials, so it bounds the subtree count from above.
/// Both routes must agree; a mismatch throws std::logic_error.
CoeffSeq coefficient_sequence(const OffspringLaw& law, std::uint32_t order);

/// b_j = q_j / j! = E[C(B, j)].
std::vector<Rational> binomial_moments(const OffspringLaw& law, std::uint32_t order);

/// Expected number of j-vertex root subtrees: the same two routes run on
/// the binomial moments, F = z E[(1 + F)^B]. `q` holds b_0..b_J.
CoeffSeq subtree_count_sequence(const OffspringLaw& law, std::uint32_t order);

/// (1/j) C(2j-2, j-1) C^{j-1}
Rational mu_upper_bound(const Rational& growth, std::uint32_t j);
/// (4C)^{j-1}
Rational mu_coarse_bound(const Rational& growth, std::uint32_t j);

/// c^{j-1}/j * C(2j-2, j-1)
Rational poisson_mu_closed_form(const Rational& c, std::uint32_t j);
/// C(dj, j-1)/j
Rational deterministic_mu_closed_form(std::uint32_t d, std::uint32_t j);
/// (cj)^{j-1} / j!, the Poisson subtree count.
Rational poisson_subtree_closed_form(const Rational& c, std::uint32_t j);

/// Children lists, root = 0.
struct RootedTree {
  std::vector<std::vector<std::uint32_t>> children;
};

/// Samples the first `depth` generations below the root (nodes at depth
/// `depth` get no children drawn). Node u's offspring count comes from the
/// stream keyed by (seed, u) with u in breadth-first order.
RootedTree sample_gw_tree(const OffspringLaw& law, std::uint32_t depth, std::uint64_t seed,
                          std::uint64_t node_budget = 1'000'000);

/// Subtrees with exactly j vertices containing the root: [z^j] N_root where
/// N_u(z) = z prod_children (1 + N_c(z)).
std::uint64_t count_root_subtrees(const RootedTree& tree, std::uint32_t j);

struct MonteCarloEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

MonteCarloEstimate brute_force_mu(const OffspringLaw& law, std::uint32_t j, std::uint64_t samples, std::uint64_t seed,
                                  unsigned threads = 0);

/// |B_{j,v}|: connected j-sets of g containing v.
std::uint64_t count_Bjv(const UndirectedGraph& g, Vertex v, std::uint32_t j,
                        std::uint64_t budget = kDefaultEnumerationBudget);

/// (4(c + 2k))^j
Rational bjv_bound(const Rational& c, std::uint32_t k, std::uint32_t j);

/// Columns j, q_j, mu_j, bound_j as exact "p/q" strings, j = 0..J.
std::string sequence_csv(const CoeffSeq& seq, const Rational& growth);

}  // namespace nwmix
