// Acceptance suite: one PASS/FAIL line per criterion.
//
//   nwmix_acceptance --cli <path to nwmix> [--only 3,7]
//
// Exit status is 0 when every criterion passes or fails only for a reason
// listed in kKnownConflicts (printed next to the FAIL line).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "nwmix/conductance.hpp"
#include "nwmix/constants.hpp"
#include "nwmix/experiments.hpp"
#include "nwmix/graph.hpp"
#include "nwmix/rng.hpp"
#include "nwmix/subtrees.hpp"
#include "nwmix/walk.hpp"
#include "oracles.hpp"

using namespace nwmix;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

// Criteria whose statement cannot be met by any single consistent
// implementation. They still print FAIL; they just do not fail the binary.
const std::map<int, std::string> kKnownConflicts = {
    {2, "the two closed forms describe different series: c^(j-1)/j C(2j-2,j-1) solves F = zQ(F) with "
        "ordered moments, C(dj,j-1)/j counts subtrees (F = z E[(1+F)^B]); no one sequence satisfies both"},
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string cli_path;

std::vector<OffspringLaw> series_laws() {
  return {PoissonLaw{1},
          PoissonLaw{Rational(7, 2)},
          BinomialLaw{50, Rational(1, 10)},
          BinomialPlusLaw{50, Rational(1, 10), 2},
          DeterministicLaw{3},
          ExplicitLaw{{Rational(1, 2), Rational(0), Rational(1, 2)}}};
}

Rational choose(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return Rational(out);
}

Rational rpow(const Rational& base, unsigned e) {
  Rational out = 1;
  for (unsigned i = 0; i < e; ++i) out *= base;
  return out;
}

Outcome criterion_series_identity() {
  Outcome out;
  std::ostringstream d;
  for (const auto& law : series_laws()) {
    const auto q = factorial_moments(law, 30);
    const bool same = mu_by_lagrange(q, 30) == mu_by_functional_equation(q, 30);
    const auto b = binomial_moments(law, 30);
    const bool same_counts = mu_by_lagrange(b, 30) == mu_by_functional_equation(b, 30);
    if (!same || !same_counts) {
      out.pass = false;
      d << describe(law) << " differs; ";
    }
  }
  d << "6 laws, J=30, exact equality for ordered and subtree-count series";
  out.detail = d.str();
  return out;
}

Outcome criterion_closed_forms() {
  // Evaluate both closed forms against each series the library computes.
  auto first_mismatch = [](const std::vector<Rational>& mu, auto closed) -> unsigned {
    for (unsigned j = 1; j <= 30; ++j)
      if (mu[j] != closed(j)) return j;
    return 0;
  };
  auto poisson = [](const Rational& c) {
    return [c](unsigned j) -> Rational { return rpow(c, j - 1) / j * choose(2 * j - 2, j - 1); };
  };
  auto deterministic = [](unsigned d) { return [d](unsigned j) -> Rational { return choose(d * j, j - 1) / j; }; };

  struct Row {
    std::string series;
    unsigned p1, p72, d3;
  };
  std::vector<Row> rows;
  for (const bool ordered : {true, false}) {
    auto mu = [&](const OffspringLaw& law) {
      return ordered ? coefficient_sequence(law, 30).mu : subtree_count_sequence(law, 30).mu;
    };
    rows.push_back({ordered ? "ordered-moment series" : "subtree-count series",
                    first_mismatch(mu(PoissonLaw{1}), poisson(1)),
                    first_mismatch(mu(PoissonLaw{Rational(7, 2)}), poisson(Rational(7, 2))),
                    first_mismatch(mu(DeterministicLaw{3}), deterministic(3))});
  }
  Outcome out;
  out.pass = std::any_of(rows.begin(), rows.end(), [](const Row& r) { return !r.p1 && !r.p72 && !r.d3; });
  std::ostringstream d;
  for (const auto& r : rows) {
    auto show = [](unsigned j) { return j ? "mismatch at j=" + std::to_string(j) : std::string("exact j<=30"); };
    d << r.series << ": poisson(1) " << show(r.p1) << ", poisson(7/2) " << show(r.p72) << ", deterministic(3) "
      << show(r.d3) << "; ";
  }
  d << "deterministic(3) j=3: ordered " << to_string(coefficient_sequence(DeterministicLaw{3}, 3).mu[3])
    << " vs C(9,2)/3 = 12; poisson(1) j=3 subtree count "
    << to_string(subtree_count_sequence(PoissonLaw{1}, 3).mu[3]) << " vs closed form 2";
  out.detail = d.str();
  return out;
}

Outcome criterion_subtree_bound() {
  Outcome out;
  struct Case {
    OffspringLaw law;
    Rational C;
  };
  const std::vector<Case> cases{{PoissonLaw{1}, 1},
                                {PoissonLaw{Rational(7, 2)}, Rational(7, 2)},
                                {BinomialLaw{50, Rational(1, 10)}, 5},
                                {BinomialLaw{100, Rational(3, 100)}, 3},
                                {BinomialPlusLaw{50, Rational(1, 10), 2}, 7}};
  unsigned checked = 0;
  for (const auto& cs : cases) {
    const auto q = factorial_moments(cs.law, 25);
    const auto mu = coefficient_sequence(cs.law, 25).mu;
    const auto counts = subtree_count_sequence(cs.law, 25).mu;
    for (unsigned j = 0; j <= 25; ++j)
      if (q[j] > rpow(cs.C, j)) {
        out.pass = false;
        out.detail += describe(cs.law) + ": q_" + std::to_string(j) + " > C^j; ";
      }
    for (unsigned j = 1; j <= 25; ++j) {
      const Rational bound = choose(2 * j - 2, j - 1) * rpow(cs.C, j - 1) / j;
      const Rational coarse = rpow(4 * cs.C, j - 1);
      const bool ok = mu[j] <= bound && counts[j] <= bound && (j == 1 ? bound == coarse : bound < coarse);
      if (!ok) {
        out.pass = false;
        out.detail += describe(cs.law) + " j=" + std::to_string(j) + "; ";
      }
      ++checked;
    }
  }
  out.detail += std::to_string(checked) + " (law, j) pairs, q_j <= C^j verified first, j <= 25";
  return out;
}

Outcome criterion_monte_carlo() {
  Outcome out;
  std::ostringstream d;
  for (unsigned j = 1; j <= 5; ++j) {
    const auto est = brute_force_mu(PoissonLaw{1}, j, 100000, derive_seed(2024, {j}));
    // Expected number of j-vertex root subtrees of a Poisson(1) tree: j^(j-1)/j!.
    Rational exact = rpow(Rational(j), j - 1);
    for (unsigned i = 2; i <= j; ++i) exact /= i;
    const double truth = exact.get_d();
    const double z = est.stderr_ > 0 ? std::fabs(est.mean - truth) / est.stderr_ : (est.mean == truth ? 0 : 1e9);
    const bool ok = z <= 3 && subtree_count_sequence(PoissonLaw{1}, j).mu[j] == exact;
    out.pass = out.pass && ok;
    const double ordered = coefficient_sequence(PoissonLaw{1}, j).mu[j].get_d();
    d << "j=" << j << " mean " << fmt(est.mean) << " exact " << fmt(truth) << " z " << fmt(z)
      << " (ordered series " << fmt(ordered) << "); ";
  }
  out.detail = d.str() + "1e5 trees each";
  return out;
}

Outcome criterion_bjv_desk_check() {
  const std::uint32_t n = 14, graphs = 500;
  const Rational c = 1;
  std::vector<std::array<double, 7>> per_graph(graphs);
  bool oracle_ok = true;
  for (std::uint32_t s = 0; s < graphs; ++s) {
    const auto g = sample_small_world({n, 1, c, derive_seed(31, {s})});
    for (unsigned j = 1; j <= 6; ++j) {
      std::uint64_t total = 0;
      for (Vertex v = 0; v < n; ++v) total += count_Bjv(g, v, j);
      per_graph[s][j] = static_cast<double>(total) / n;
    }
    if (s < 5)
      for (unsigned j = 1; j <= 6; ++j)
        oracle_ok = oracle_ok && count_Bjv(g, 3, j) == oracle::count_sets_containing(g, 3, j);
  }
  const auto tree_mu = subtree_count_sequence(BinomialPlusLaw{n - 3, c / n, 2}, 6).mu;
  Outcome out;
  out.pass = oracle_ok;
  std::ostringstream d;
  if (!oracle_ok) d << "enumeration disagrees with bitmask oracle; ";
  for (unsigned j = 1; j <= 6; ++j) {
    double mean = 0, m2 = 0;
    for (std::uint32_t s = 0; s < graphs; ++s) {
      const double delta = per_graph[s][j] - mean;
      mean += delta / (s + 1);
      m2 += delta * (per_graph[s][j] - mean);
    }
    const double se = std::sqrt(m2 / (graphs - 1) / graphs);
    const double bound = rpow(4 * (c + 2), j).get_d();
    const double mu = tree_mu[j].get_d();
    const bool ok = mean <= bound && mean <= mu + 3 * se;
    out.pass = out.pass && ok;
    d << "j=" << j << " mean " << fmt(mean) << " (se " << fmt(se) << ") bound " << fmt(bound) << " tree mu "
      << fmt(mu) << (ok ? "" : " VIOLATED") << "; ";
  }
  out.detail = d.str() + "500 graphs, all v";
  return out;
}

Outcome criterion_mixing_oracle() {
  std::vector<std::pair<std::string, UndirectedGraph>> graphs{
      {"C8", build_ring(8, 1)}, {"C16", build_ring(16, 1)}, {"K5", complete_graph(5)}};
  for (std::uint32_t s = 0; s < 10; ++s)
    graphs.emplace_back("H16#" + std::to_string(s), sample_small_world({16, 1, 2, derive_seed(6, {s})}));
  Outcome out;
  std::ostringstream d;
  for (const auto& [name, g] : graphs) {
    const auto lib = mixing_time(g);
    const auto ref = oracle::dense_mixing_time(g);
    const bool ok = !lib.censored && ref && lib.tau == *ref;
    out.pass = out.pass && ok;
    d << name << " " << lib.tau << (ok ? "" : "!=" + (ref ? std::to_string(*ref) : std::string("none"))) << ' ';
  }
  out.detail = d.str() + "(tau, library vs dense exact oracle)";
  return out;
}

Outcome criterion_diffusive() {
  Outcome out;
  std::ostringstream d;
  std::map<std::uint32_t, std::uint64_t> tau;
  for (std::uint32_t n : {32u, 64u, 128u, 256u}) {
    const auto r = mixing_time(build_ring(n, 1));
    tau[n] = r.tau;
    out.pass = out.pass && !r.censored;
  }
  // The cycle is vertex-transitive, so one exact-rational start certifies the worst case.
  for (std::uint32_t n : {32u, 64u}) {
    const LazyKernel kernel(build_ring(n, 1));
    const auto exact = mixing_time_from_exact(kernel, 0, Rational(1, 4), 1'000'000);
    const bool ok = exact && *exact == tau[n];
    out.pass = out.pass && ok;
    if (!ok) d << "C" << n << " float/exact disagree; ";
  }
  for (std::uint32_t n : {32u, 64u, 128u}) {
    const double ratio = static_cast<double>(tau[2 * n]) / static_cast<double>(tau[n]);
    const bool ok = ratio >= 3 && ratio <= 5;
    out.pass = out.pass && ok;
    d << "tau(C" << 2 * n << ")/tau(C" << n << ") = " << tau[2 * n] << "/" << tau[n] << " = " << fmt(ratio) << "; ";
  }
  ExperimentConfig cfg;
  cfg.n_values = {16, 32, 64, 128};
  cfg.c = 0;
  cfg.seed = 7;
  const auto report = run_scaling(cfg);
  d << "c=0 medians";
  for (std::size_t i = 0; i < report.summaries.size(); ++i) {
    d << ' ' << fmt(report.summaries[i].median_ratio);
    if (i && !(report.summaries[i].median_ratio > report.summaries[i - 1].median_ratio)) out.pass = false;
  }
  out.detail = d.str();
  return out;
}

Outcome criterion_small_world_scaling() {
  ExperimentConfig cfg;
  cfg.n_values = {512, 1024, 2048, 4096};
  cfg.k = 1;
  cfg.c = 5;
  cfg.reps = 20;
  cfg.seed = 8;
  cfg.starts = StartPolicy::sampled_starts;
  cfg.samples = 64;
  const auto report = run_scaling(cfg);
  Outcome out;
  std::ostringstream d;
  double lo = 1e300, hi = 0;
  std::uint32_t with_arc = 0;
  for (const auto& r : report.records)
    if (r.starts > 64) ++with_arc;
  for (const auto& s : report.summaries) {
    lo = std::min(lo, s.median_ratio);
    hi = std::max(hi, s.median_ratio);
    d << "n=" << s.n << " median " << fmt(s.median_ratio) << (s.censored ? " (censored runs)" : "") << "; ";
    if (s.censored) out.pass = false;
  }
  const double spread = hi / lo;
  out.pass = out.pass && spread <= 3;
  d << "max/min " << fmt(spread) << ", quiet-arc start added in " << with_arc << "/" << report.records.size()
    << " runs";
  out.detail = d.str();
  return out;
}

Outcome criterion_conductance_exactness() {
  const auto c16 = build_ring(16, 1);
  std::vector<std::optional<Rational>> scales;
  const Rational expected = oracle::fr_sum(c16, &scales);
  const auto fr = fr_bound(c16, {});
  Outcome out;
  out.pass = fr.sum == expected && fr.profile.entries.size() == scales.size() && !fr.lower_estimate;
  for (std::size_t i = 0; out.pass && i < scales.size(); ++i) {
    const auto& w = fr.profile.entries[i].min;
    out.pass = w.found == scales[i].has_value() && (!w.found || make_rational(w.cut, w.volume) == *scales[i]);
  }
  std::uint32_t arcs = 0;
  for (Vertex start = 0; start < 16; ++start)
    for (std::uint32_t len = 1; len < 16; ++len) {
      std::vector<Vertex> arc;
      for (std::uint32_t i = 0; i < len; ++i) arc.push_back((start + i) % 16);
      if (cut_stats(c16, arc).phi_exact() != Rational(1, len)) out.pass = false;
      ++arcs;
    }
  out.detail = "C16 FR sum " + to_string(fr.sum) + " vs oracle " + to_string(expected) + " over " +
               std::to_string(scales.size()) + " scales; Phi = 1/l on " + std::to_string(arcs) + " arcs";
  return out;
}

Outcome criterion_heuristic_dominance() {
  Outcome out;
  std::uint32_t compared = 0, equal = 0, violations = 0;
  for (std::uint32_t s = 0; s < 50; ++s) {
    const auto g = sample_small_world({20, 1, 3, derive_seed(10, {s})});
    ConductanceOptions exact_opts;
    ConductanceOptions local_opts;
    local_opts.mode = SearchMode::local_search;
    local_opts.local.seed = derive_seed(1010, {s});
    const auto exact = scale_profile(g, exact_opts);
    const auto local = scale_profile(g, local_opts);
    for (std::size_t i = 0; i < exact.entries.size(); ++i) {
      const auto& e = exact.entries[i].min;
      const auto& h = local.entries[i].min;
      if (!e.found) {
        if (h.found) ++violations;  // heuristic found a set exact search missed
        continue;
      }
      ++compared;
      if (!h.found) continue;  // +inf >= exact
      const Rational he = make_rational(h.cut, h.volume), ee = make_rational(e.cut, e.volume);
      if (he < ee) ++violations;
      if (he == ee) ++equal;
    }
  }
  out.pass = violations == 0;
  const double freq = compared ? static_cast<double>(equal) / compared : 0;
  out.detail = std::to_string(violations) + " violations over " + std::to_string(compared) +
               " (graph, scale) pairs; equality " + fmt(100 * freq) + "% (soft target 90%: " +
               (freq >= 0.9 ? "met" : "not met") + ")";
  return out;
}

Outcome criterion_constants() {
  Outcome out;
  std::ostringstream d;
  double worst_residual = 0, min_xk = 1e300;
  for (std::uint32_t k = 1; k <= 10; ++k) {
    const double x = solve_xk(k);
    const double residual = std::fabs(x / 720 - std::log(4 * (x + 2.0 * k)) - 5);
    worst_residual = std::max(worst_residual, residual);
    min_xk = std::min(min_xk, x);
    if (residual > 1e-9 || x < 40) out.pass = false;
  }
  d << "max x_k residual " << fmt(worst_residual) << ", min x_k " << fmt(min_xk) << "; ";

  const double third_e = 1 / (3 * std::exp(1.0));
  for (auto [ci, k] : std::vector<std::pair<int, std::uint32_t>>{{1, 1}, {5, 2}, {40, 1}}) {
    const double c = ci;
    const double b = solve_beta(c, k);
    const double t = 1 / (3 * b);
    const bool beta_ok = 1 / (2 * b) - 8.0 * k / c > 1 + t && (1 + t) * std::log(1 + t) - t > std::log(t) / (6 * b) &&
                         b < c / 36 && b < third_e;

    const auto s = solve_small_c_constants(ci, k);
    const double x1 = solve_xk(1);
    const double R = static_cast<double>(s.R);
    const bool r_ok = R >= std::max<double>(k, 2 * x1 / c) && R - 1 < std::max<double>(k, 2 * x1 / c);
    const Rational Rq(static_cast<unsigned long>(s.R));
    const bool eps_ok = s.epsilon == Rational(ci) / (12 * Rq * (2 * Rq * ci + 1));
    const double eps = s.epsilon.get_d(), ld = s.delta.log_value;
    // eps c >= 2k delta and eps R c (log(eps/delta) - 1) >= 5 + log(4(c+2k)), delta carried as a log.
    const bool delta_ok = std::log(eps * c) >= std::log(2.0 * k) + ld &&
                          eps * R * c * (std::log(eps) - ld - 1) >= 5 + std::log(4 * (c + 2 * k));
    const double g = s.gamma;
    const bool gamma_ok = g > 0 && g < 9 * s.beta * c / (20 * R) &&
                          2 * g * (1 + std::log(1 + 1 / (2 * g))) <= 9 * s.beta * c / (320 * R);
    const double alpha_log = std::min({std::log(g), std::log(eps), ld});
    const bool alpha_ok = std::fabs(s.alpha.log_value - alpha_log) <= 1e-12 * std::fabs(alpha_log);
    const bool ok = beta_ok && s.beta == b && r_ok && eps_ok && delta_ok && gamma_ok && alpha_ok && s.all_hold();
    out.pass = out.pass && ok;
    d << "(c=" << ci << ",k=" << k << ") beta " << fmt(b) << " R " << s.R << " delta e^" << fmt(ld) << " gamma "
      << fmt(g) << (ok ? " ok" : " FAILED") << "; ";
  }

  std::uint32_t pairs = 0;
  for (std::uint32_t n = 3; n <= 16; ++n) {
    std::vector<std::uint64_t> hist(n + 1, 0);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) ++hist[oracle::cyclic_runs(n, mask)];
    std::uint64_t tally = 0;
    for (std::uint32_t m = 1; m <= n; ++m) {
      tally = 0;
      for (std::uint32_t r = 0; r <= m && r <= n; ++r) tally += hist[r];
      if (cycle_subset_count(n, m) < BigInt(static_cast<unsigned long>(tally))) out.pass = false;
      if (cycle_subset_tally(n, m) != tally) out.pass = false;
      ++pairs;
    }
  }
  d << "cycle count dominates the exhaustive tally on " << pairs << " (n,m) pairs";
  out.detail = d.str();
  return out;
}

Outcome criterion_blow_up() {
  const std::uint32_t n = 300, k = 2, R = 5, samples = 2000;
  const Rational c = 2, p = c / n;
  const Rational p_prime = 1 - rpow(1 - p, R * R);
  const std::uint32_t blocks = n / R;
  Outcome out;
  std::uint64_t present = 0, trials = 0;
  bool structure = true;
  for (std::uint32_t s = 0; s < samples; ++s) {
    const auto g = sample_small_world({n, k, c, derive_seed(12, {s})});
    const auto map = blow_up(g, R);
    const auto& aux = map.auxiliary;
    for (std::uint32_t b = 0; b < blocks; ++b) structure = structure && aux.has_edge(b, (b + 1) % blocks);
    if (s < 20)  // edge iff some base edge joins the blocks
      for (std::uint32_t a = 0; a < blocks; ++a)
        for (std::uint32_t b = a + 1; b < blocks; ++b) {
          bool joined = false;
          for (Vertex u = a * R; u < (a + 1) * R && !joined; ++u)
            for (Vertex v = b * R; v < (b + 1) * R && !joined; ++v) joined = g.has_edge(u, v);
          structure = structure && aux.has_edge(a, b) == joined;
        }
    for (std::uint32_t a = 0; a < blocks; ++a)
      for (std::uint32_t b = a + 2; b < blocks; ++b) {
        if (a == 0 && b == blocks - 1) continue;  // cyclically adjacent
        ++trials;
        present += aux.has_edge(a, b);
      }
  }
  const double pp = p_prime.get_d();
  const double freq = static_cast<double>(present) / trials;
  const double se = std::sqrt(pp * (1 - pp) / trials);
  const double z = std::fabs(freq - pp) / se;
  out.pass = structure && z <= 3;
  out.detail = "ring containment " + std::string(structure ? "exact" : "BROKEN") + "; frequency " + fmt(freq) +
               " vs p' = 1-(1-p)^25 = " + fmt(pp) + " (z " + fmt(z) + ", " + std::to_string(trials) +
               " pair trials over 2000 graphs, c=2)";
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome criterion_reproducibility() {
  Outcome out;
  if (cli_path.empty()) return {false, "no --cli path given"};
  const fs::path dir = fs::temp_directory_path() / ("nwmix_repro_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "scaling.cfg");
    cfg << "# reproducibility run\nn = 64, 128\nk = 1\nc = 5\nseed = 13\nreps = 3\nstarts = sampled\nsamples = 8\n";
  }
  {
    std::ofstream cfg(dir / "quiet.cfg");
    cfg << "n = 2000\nc = 1\nseed = 4\nreps = 3\nsamples = 50\n";
  }
  const std::vector<std::pair<std::string, std::string>> commands{
      {"generate", "generate --n 200 --k 2 --c 7/2 --seed 9 --out {}"},
      {"mix", "mix --n 60 --k 1 --c 3 --seed 2 --out {}"},
      {"mix-sampled", "mix --n 300 --c 3 --seed 2 --starts sampled --samples 6 --out {}"},
      {"conductance", "conductance --n 14 --c 2 --seed 5 --phi0 true --out {}"},
      {"conductance-local", "conductance --n 24 --c 2 --seed 5 --mode local-search --out {}"},
      {"fr-bound", "fr-bound --n 16 --c 3 --seed 1 --out {}"},
      {"subtrees", "subtrees --law binomial-plus:50:1/10:2 --order 20 --out {}"},
      {"subtrees-verify", "subtrees --verify --n 12 --c 1 --reps 20 --mc_samples 2000 --seed 3 --out {}"},
      {"constants", "constants --c 5 --k 2 --out {}"},
      {"scaling", "scaling --config " + (dir / "scaling.cfg").string() + " --reps 2 --out {}"},
      {"quiet-arc", "quiet-arc --config " + (dir / "quiet.cfg").string() + " --out {}"},
  };
  std::ostringstream d;
  std::uint32_t identical = 0;
  for (const auto& [name, args] : commands) {
    std::string outputs[2];
    bool ran = true;
    for (int run = 0; run < 2; ++run) {
      const fs::path target = dir / (name + "." + std::to_string(run));
      std::string a = args;
      a.replace(a.find("{}"), 2, target.string());
      const int status = std::system(("\"" + cli_path + "\" " + a + " 2>/dev/null").c_str());
      if (status != 0) ran = false;
      outputs[run] = slurp(target);
      for (const char* suffix : {".json", ".phi0.csv", ".summary.csv"}) {
        fs::path extra = target;
        extra += suffix;
        if (fs::exists(extra)) outputs[run] += "\n--" + std::string(suffix) + "--\n" + slurp(extra);
      }
    }
    const bool same = ran && !outputs[0].empty() && outputs[0] == outputs[1];
    if (same)
      ++identical;
    else
      d << name << (ran ? " differs; " : " exited nonzero; ");
    out.pass = out.pass && same;
  }
  fs::remove_all(dir);
  d << identical << "/" << commands.size() << " commands byte-identical across reruns";
  out.detail = d.str();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) {
      cli_path = argv[++i];
    } else if (arg == "--only" && i + 1 < argc) {
      std::stringstream list(argv[++i]);
      std::string item;
      while (std::getline(list, item, ',')) only.insert(std::stoi(item));
    } else {
      std::cerr << "usage: nwmix_acceptance --cli <nwmix> [--only 1,2,...]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "series identity (Lagrange vs functional equation)", 10, criterion_series_identity},
      {2, "closed forms (Poisson, deterministic)", 5, criterion_closed_forms},
      {3, "subtree bound under q_j <= C^j", 5, criterion_subtree_bound},
      {4, "Monte Carlo subtree counts", 60, criterion_monte_carlo},
      {5, "B_{j,v} desk check on H_{14,1,1}", 300, criterion_bjv_desk_check},
      {6, "mixing time vs dense oracle", 60, criterion_mixing_oracle},
      {7, "diffusive control on cycles", 300, criterion_diffusive},
      {8, "small-world scaling tau/ln^2 n", 1800, criterion_small_world_scaling},
      {9, "conductance exactness on C16", 60, criterion_conductance_exactness},
      {10, "local search dominance", 600, criterion_heuristic_dominance},
      {11, "constants and cycle counts", 60, criterion_constants},
      {12, "blow-up shortcut distribution", 300, criterion_blow_up},
      {13, "byte-identical reruns", 600, criterion_reproducibility},
  };

  int unexpected = 0, passed = 0, run = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++run;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.limit_seconds) + " s limit";
    }
    std::printf("%s criterion %2d  %-52s %8.2fs  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                o.detail.c_str());
    if (o.pass) {
      ++passed;
    } else if (auto it = kKnownConflicts.find(c.id); it != kKnownConflicts.end()) {
      std::printf("     criterion %2d  known conflict: %s\n", c.id, it->second.c_str());
    } else {
      ++unexpected;
    }
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed, %d unexpected failure(s)\n", passed, run, unexpected);
  return unexpected == 0 ? 0 : 1;
}
