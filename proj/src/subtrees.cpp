#include "nwmix/subtrees.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nwmix/error.hpp"
#include "nwmix/parallel.hpp"
#include "nwmix/rng.hpp"

namespace nwmix {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw ValidationError("probability parameter outside [0, 1]");
}

}  // namespace

void validate(const OffspringLaw& law) {
  std::visit(overloaded{
                 [](const PoissonLaw& l) {
                   if (l.c <= 0) throw ValidationError("Poisson mean must be positive");
                 },
                 [](const BinomialLaw& l) { check_probability(l.p); },
                 [](const BinomialPlusLaw& l) { check_probability(l.p); },
                 [](const DeterministicLaw& l) {
                   if (l.d < 1) throw ValidationError("deterministic branching needs d >= 1");
                 },
                 [](const ExplicitLaw& l) {
                   if (l.pmf.empty()) throw ValidationError("explicit law needs a nonempty pmf");
                   Rational total = 0;
                   for (const auto& w : l.pmf) {
                     if (w < 0) throw ValidationError("explicit pmf has a negative weight");
                     total += w;
                   }
                   if (total != 1) throw ValidationError("explicit pmf sums to " + to_string(total) + ", not 1");
                 },
             },
             law);
}

std::string describe(const OffspringLaw& law) {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return "poisson:" + to_string(l.c); },
                        [](const BinomialLaw& l) { return "binomial:" + std::to_string(l.n) + ":" + to_string(l.p); },
                        [](const BinomialPlusLaw& l) {
                          return "binomial-plus:" + std::to_string(l.n) + ":" + to_string(l.p) + ":" +
                                 std::to_string(l.ell);
                        },
                        [](const DeterministicLaw& l) { return "deterministic:" + std::to_string(l.d); },
                        [](const ExplicitLaw& l) {
                          std::string out = "explicit:";
                          for (std::size_t m = 0; m < l.pmf.size(); ++m) out += (m ? "," : "") + to_string(l.pmf[m]);
                          return out;
                        },
                    },
                    law);
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::uint32_t parse_count(const std::string& text) {
  const Rational r = parse_rational(text);
  if (r < 0 || r.get_den() != 1 || r > UINT32_MAX) throw ValidationError("expected a nonnegative integer, got '" + text + "'");
  return static_cast<std::uint32_t>(r.get_num().get_ui());
}

}  // namespace

OffspringLaw parse_law(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw ValidationError("empty offspring law");
  const std::string& kind = parts[0];
  auto need = [&](std::size_t count) {
    if (parts.size() != count) throw ValidationError("offspring law '" + text + "' has the wrong number of fields");
  };
  OffspringLaw law;
  if (kind == "poisson") {
    need(2);
    law = PoissonLaw{parse_rational(parts[1])};
  } else if (kind == "binomial") {
    need(3);
    law = BinomialLaw{parse_count(parts[1]), parse_rational(parts[2])};
  } else if (kind == "binomial-plus") {
    need(4);
    law = BinomialPlusLaw{parse_count(parts[1]), parse_rational(parts[2]), parse_count(parts[3])};
  } else if (kind == "deterministic") {
    need(2);
    law = DeterministicLaw{parse_count(parts[1])};
  } else if (kind == "explicit") {
    need(2);
    ExplicitLaw e;
    for (const auto& w : split(parts[1], ',')) e.pmf.push_back(parse_rational(w));
    law = std::move(e);
  } else {
    throw ValidationError("unknown offspring law '" + kind + "'");
  }
  validate(law);
  return law;
}

Rational growth_constant(const OffspringLaw& law) {
  return std::visit(overloaded{
                        [](const PoissonLaw& l) { return l.c; },
                        [](const BinomialLaw& l) { return Rational(l.p * l.n); },
                        [](const BinomialPlusLaw& l) { return Rational(l.p * l.n + l.ell); },
                        [](const DeterministicLaw& l) { return Rational(l.d); },
                        [](const ExplicitLaw& l) {
                          std::size_t top = 0;
                          for (std::size_t m = 0; m < l.pmf.size(); ++m)
                            if (l.pmf[m] > 0) top = m;
                          return Rational(static_cast<unsigned long>(top));
                        },
                    },
                    law);
}

std::vector<Rational> factorial_moments(const OffspringLaw& law, std::uint32_t order) {
  validate(law);
  std::vector<Rational> q(order + 1);
  for (std::uint32_t j = 0; j <= order; ++j) {
    q[j] = std::visit(overloaded{
                          [&](const PoissonLaw& l) { return pow(l.c, j); },
                          [&](const BinomialLaw& l) { return Rational(falling_factorial(l.n, j) * pow(l.p, j)); },
                          [&](const BinomialPlusLaw& l) {
                            // Ordered choices split between the ell fixed children and the binomial ones.
                            Rational acc = 0;
                            for (std::uint32_t s = 0; s <= j; ++s)
                              acc += binomial(j, s) * falling_factorial(l.ell, s) * falling_factorial(l.n, j - s) *
                                     pow(l.p, j - s);
                            return acc;
                          },
                          [&](const DeterministicLaw& l) { return Rational(falling_factorial(l.d, j)); },
                          [&](const ExplicitLaw& l) {
                            Rational acc = 0;
                            for (std::size_t m = j; m < l.pmf.size(); ++m) acc += l.pmf[m] * falling_factorial(m, j);
                            return acc;
                          },
                      },
                      law);
  }
  return q;
}

std::vector<Rational> mu_by_functional_equation(std::span<const Rational> q, std::uint32_t order) {
  if (order == 0) return {Rational(0)};
  if (q.size() < order) throw ValidationError("need q_0 .. q_{J-1} for order J");
  std::vector<Rational> mu(order + 1, 0);
  // power[j][s] = [z^s] F(z)^j, filled one column s at a time.
  std::vector<std::vector<Rational>> power(order, std::vector<Rational>(order, 0));
  power[0][0] = 1;
  for (std::uint32_t r = 0; r + 1 <= order; ++r) {
    for (std::uint32_t j = 1; j <= r; ++j) {
      Rational acc = 0;
      for (std::uint32_t t = 1; t + j - 1 <= r; ++t) acc += mu[t] * power[j - 1][r - t];
      power[j][r] = acc;
    }
    Rational next = 0;
    for (std::uint32_t j = 0; j <= r; ++j) next += q[j] * power[j][r];
    mu[r + 1] = next;
  }
  return mu;
}

std::vector<Rational> mu_by_lagrange(std::span<const Rational> q, std::uint32_t order) {
  if (order == 0) return {Rational(0)};
  if (q.size() < order) throw ValidationError("need q_0 .. q_{J-1} for order J");
  std::vector<Rational> mu(order + 1, 0);
  const std::uint32_t width = order;  // degrees 0 .. J-1
  std::vector<Rational> qp(q.begin(), q.begin() + width);
  std::vector<Rational> scratch(width);
  for (std::uint32_t j = 1; j <= order; ++j) {
    if (j > 1) {
      for (std::uint32_t s = 0; s < width; ++s) {
        Rational acc = 0;
        for (std::uint32_t t = 0; t <= s; ++t) acc += qp[t] * q[s - t];
        scratch[s] = acc;
      }
      qp.swap(scratch);
    }
    mu[j] = qp[j - 1] / j;
  }
  return mu;
}

CoeffSeq coefficient_sequence(const OffspringLaw& law, std::uint32_t order) {
  CoeffSeq seq;
  seq.q = factorial_moments(law, order);
  seq.mu = mu_by_lagrange(seq.q, order);
  if (mu_by_functional_equation(seq.q, order) != seq.mu)
    throw std::logic_error("Lagrange inversion and the functional equation disagree for " + describe(law));
  return seq;
}

std::vector<Rational> binomial_moments(const OffspringLaw& law, std::uint32_t order) {
  std::vector<Rational> b = factorial_moments(law, order);
  BigInt factorial = 1;
  for (std::uint32_t j = 1; j <= order; ++j) {
    factorial *= j;
    b[j] /= factorial;
  }
  return b;
}

CoeffSeq subtree_count_sequence(const OffspringLaw& law, std::uint32_t order) {
  CoeffSeq seq;
  seq.q = binomial_moments(law, order);
  seq.mu = mu_by_lagrange(seq.q, order);
  if (mu_by_functional_equation(seq.q, order) != seq.mu)
    throw std::logic_error("Lagrange inversion and the functional equation disagree for " + describe(law));
  return seq;
}

Rational mu_upper_bound(const Rational& growth, std::uint32_t j) {
  if (j < 1) throw ValidationError("mu bound needs j >= 1");
  if (growth <= 0) throw ValidationError("mu bound needs C > 0");
  return Rational(binomial(2 * j - 2, j - 1) * pow(growth, j - 1) / j);
}

Rational mu_coarse_bound(const Rational& growth, std::uint32_t j) {
  if (j < 1) throw ValidationError("mu bound needs j >= 1");
  return pow(Rational(4 * growth), j - 1);
}

Rational poisson_mu_closed_form(const Rational& c, std::uint32_t j) {
  if (j < 1) return 0;
  return Rational(pow(c, j - 1) * binomial(2 * j - 2, j - 1) / j);
}

Rational poisson_subtree_closed_form(const Rational& c, std::uint32_t j) {
  if (j < 1) throw ValidationError("closed form needs j >= 1");
  BigInt factorial;
  mpz_fac_ui(factorial.get_mpz_t(), j);
  return pow(c * j, j - 1) / factorial;
}

Rational deterministic_mu_closed_form(std::uint32_t d, std::uint32_t j) {
  if (j < 1) return 0;
  return make_rational(binomial(static_cast<std::uint64_t>(d) * j, j - 1), j);
}

namespace {

// Inversion sampler over a cumulative table in double precision.
class OffspringSampler {
 public:
  explicit OffspringSampler(const OffspringLaw& law) {
    std::visit(overloaded{
                   [&](const PoissonLaw& l) {
                     const double c = l.c.get_d();
                     double term = std::exp(-c);
                     for (std::uint32_t m = 0; m < 100000; ++m) {
                       push(term);
                       if (m > c && 1.0 - total_ < 1e-17) break;
                       term *= c / (m + 1);
                     }
                   },
                   [&](const BinomialLaw& l) { binomial_table(l.n, l.p.get_d(), 0); },
                   [&](const BinomialPlusLaw& l) { binomial_table(l.n, l.p.get_d(), l.ell); },
                   [&](const DeterministicLaw& l) {
                     offset_ = l.d;
                     push(1.0);
                   },
                   [&](const ExplicitLaw& l) {
                     for (const auto& w : l.pmf) push(w.get_d());
                   },
               },
               law);
  }

  std::uint32_t draw(Rng& rng) const {
    const double u = rng.uniform() * total_;
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    const auto index = static_cast<std::uint32_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
    return index + offset_;
  }

 private:
  void push(double w) {
    total_ += w;
    cdf_.push_back(total_);
  }

  void binomial_table(std::uint32_t n, double p, std::uint32_t shift) {
    offset_ = shift;
    for (std::uint32_t m = 0; m <= n; ++m) {
      const double logw = std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0) +
                          (m ? m * std::log(p) : 0.0) + (n - m ? (n - m) * std::log1p(-p) : 0.0);
      push(std::exp(logw));
    }
  }

  std::vector<double> cdf_;
  double total_ = 0.0;
  std::uint32_t offset_ = 0;
};

}  // namespace

RootedTree sample_gw_tree(const OffspringLaw& law, std::uint32_t depth, std::uint64_t seed, std::uint64_t node_budget) {
  validate(law);
  const OffspringSampler sampler(law);
  RootedTree tree;
  tree.children.emplace_back();
  std::vector<std::uint32_t> level{0};
  for (std::uint32_t d = 0; d < depth && !level.empty(); ++d) {
    std::vector<std::uint32_t> next;
    for (std::uint32_t u : level) {
      Rng rng(derive_seed(seed, {u}));
      const std::uint32_t kids = sampler.draw(rng);
      if (tree.children.size() + kids > node_budget)
        throw BudgetExceeded("Galton-Watson sample exceeded " + std::to_string(node_budget) + " nodes");
      for (std::uint32_t c = 0; c < kids; ++c) {
        const auto id = static_cast<std::uint32_t>(tree.children.size());
        tree.children.emplace_back();
        tree.children[u].push_back(id);
        next.push_back(id);
      }
    }
    level.swap(next);
  }
  return tree;
}

std::uint64_t count_root_subtrees(const RootedTree& tree, std::uint32_t j) {
  if (j == 0) return 0;
  const std::size_t count = tree.children.size();
  // Breadth-first ids: children always exceed their parent, so a reverse
  // sweep sees every child before its parent.
  std::vector<std::vector<std::uint64_t>> poly(count);
  for (std::size_t u = count; u-- > 0;) {
    std::vector<std::uint64_t> acc(j, 0);  // prod (1 + N_c), degrees 0 .. j-1
    acc[0] = 1;
    for (std::uint32_t c : tree.children[u]) {
      if (c <= u) throw ValidationError("tree ids must be breadth-first (child id > parent id)");
      const auto& child = poly[c];
      std::vector<std::uint64_t> next(acc);
      for (std::uint32_t a = 0; a < j; ++a) {
        if (!acc[a]) continue;
        for (std::uint32_t b = 1; a + b < j; ++b) {
          std::uint64_t term;
          if (__builtin_mul_overflow(acc[a], child[b], &term) || __builtin_add_overflow(next[a + b], term, &next[a + b]))
            throw std::overflow_error("subtree count exceeds 64 bits");
        }
      }
      acc.swap(next);
      poly[c].clear();
      poly[c].shrink_to_fit();
    }
    // N_u = z * acc, stored with degrees 0 .. j.
    poly[u].assign(j + 1, 0);
    for (std::uint32_t a = 0; a < j; ++a) poly[u][a + 1] = acc[a];
  }
  return poly[0][j];
}

MonteCarloEstimate brute_force_mu(const OffspringLaw& law, std::uint32_t j, std::uint64_t samples, std::uint64_t seed,
                                  unsigned threads) {
  if (j < 1) throw ValidationError("brute_force_mu needs j >= 1");
  if (samples < 2) throw ValidationError("brute_force_mu needs at least two samples");
  validate(law);
  std::vector<std::uint64_t> counts(samples);
  parallel_for(
      samples,
      [&](std::size_t s) {
        // Vertices deeper than j-1 cannot belong to a j-vertex root subtree.
        const RootedTree tree = sample_gw_tree(law, j - 1, derive_seed(seed, {j, s}));
        counts[s] = count_root_subtrees(tree, j);
      },
      threads ? threads : default_thread_count());

  double mean = 0.0, m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    const double x = static_cast<double>(counts[s]);
    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  const double variance = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(variance / static_cast<double>(samples)), samples};
}

std::uint64_t count_Bjv(const UndirectedGraph& g, Vertex v, std::uint32_t j, std::uint64_t budget) {
  return count_connected_sets(g, j, v, budget);
}

Rational bjv_bound(const Rational& c, std::uint32_t k, std::uint32_t j) {
  return pow(Rational(4 * (c + 2 * k)), j);
}

std::string sequence_csv(const CoeffSeq& seq, const Rational& growth) {
  std::ostringstream out;
  out << "j,q_j,mu_j,bound_j\n";
  const std::size_t count = std::min(seq.q.size(), seq.mu.size());
  for (std::uint32_t j = 0; j < count; ++j) {
    out << j << ',' << to_string(seq.q[j]) << ',' << to_string(seq.mu[j]) << ','
        << (j == 0 || growth <= 0 ? std::string("0") : to_string(mu_upper_bound(growth, j))) << '\n';
  }
  return out.str();
}

}  // namespace nwmix
