#include "nwmix/conductance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "nwmix/error.hpp"
#include "nwmix/parallel.hpp"
#include "nwmix/rng.hpp"

namespace nwmix {

CutStats cut_stats(const UndirectedGraph& g, std::span<const Vertex> set) {
  if (set.empty()) throw ValidationError("cut_stats: conductance of the empty set is undefined");
  CutStats out;
  std::vector<char> in(g.n(), 0);
  for (Vertex v : set) {
    if (v >= g.n()) throw ValidationError("cut_stats: vertex " + std::to_string(v) + " out of range");
    if (in[v]) throw ValidationError("cut_stats: vertex " + std::to_string(v) + " listed twice");
    in[v] = 1;
  }
  for (Vertex v : set) {
    out.volume += g.degree(v);
    for (Vertex w : g.neighbors(v)) {
      if (!in[w])
        ++out.cut;
      else if (v < w)
        ++out.internal;
    }
  }
  out.set.assign(set.begin(), set.end());
  std::sort(out.set.begin(), out.set.end());
  return out;
}

namespace {

enum Mark : char { kFree = 0, kInSet = 1, kCandidate = 2, kExcluded = 3 };

class Enumerator {
 public:
  Enumerator(const UndirectedGraph& g, const ConnectedSetQuery& q,
             const std::function<void(const ConnectedSetView&)>& visit)
      : g_(g), q_(q), visit_(visit), mark_(g.n(), kFree) {
    max_size_ = q.max_size == 0 ? g.n() : std::min(q.max_size, g.n());
  }

  void run() {
    if (q_.containing) {
      root(*q_.containing);
      return;
    }
    for (Vertex r = 0; r < g_.n(); ++r) {
      // Sets rooted at r never contain a smaller vertex.
      for (Vertex v = 0; v < r; ++v) mark_[v] = kExcluded;
      root(r);
      for (Vertex v = 0; v < r; ++v) mark_[v] = kFree;
    }
  }

 private:
  void root(Vertex r) {
    if (g_.degree(r) > q_.max_volume) return;
    mark_[r] = kInSet;
    set_.assign(1, r);
    std::vector<Vertex> ext;
    for (Vertex w : g_.neighbors(r))
      if (mark_[w] == kFree) {
        mark_[w] = kCandidate;
        ext.push_back(w);
      }
    extend(ext, g_.degree(r), g_.degree(r));
    for (Vertex w : ext) mark_[w] = kFree;
    mark_[r] = kFree;
  }

  void extend(const std::vector<Vertex>& ext, std::uint64_t volume, std::uint64_t cut) {
    if (++visited_ > q_.budget)
      throw BudgetExceeded("connected-set enumeration exceeded its budget of " + std::to_string(q_.budget) + " sets");
    if (set_.size() >= q_.min_size) visit_(ConnectedSetView{set_, volume, cut});
    if (set_.size() == max_size_) return;

    std::vector<Vertex> child;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      const Vertex u = ext[i];
      const std::uint32_t du = g_.degree(u);
      if (volume + du <= q_.max_volume) {
        child.assign(ext.begin() + static_cast<std::ptrdiff_t>(i) + 1, ext.end());
        const std::size_t inherited = child.size();
        std::uint64_t inside = 0;
        for (Vertex w : g_.neighbors(u)) {
          if (mark_[w] == kInSet) {
            ++inside;
          } else if (mark_[w] == kFree) {
            mark_[w] = kCandidate;
            child.push_back(w);
          }
        }
        mark_[u] = kInSet;
        set_.push_back(u);
        extend(child, volume + du, cut + du - 2 * inside);
        set_.pop_back();
        for (std::size_t c = inherited; c < child.size(); ++c) mark_[child[c]] = kFree;
      }
      mark_[u] = kExcluded;
    }
    for (Vertex u : ext) mark_[u] = kCandidate;
  }

  const UndirectedGraph& g_;
  const ConnectedSetQuery& q_;
  const std::function<void(const ConnectedSetView&)>& visit_;
  std::vector<char> mark_;
  std::vector<Vertex> set_;
  std::uint32_t max_size_ = 0;
  std::uint64_t visited_ = 0;
};

}  // namespace

void visit_connected_sets(const UndirectedGraph& g, const ConnectedSetQuery& query,
                          const std::function<void(const ConnectedSetView&)>& visit) {
  if (query.containing && *query.containing >= g.n()) throw ValidationError("containing vertex out of range");
  if (query.min_size < 1) throw ValidationError("connected sets have at least one vertex");
  Enumerator(g, query, visit).run();
}

std::vector<std::vector<Vertex>> connected_sets(const UndirectedGraph& g, std::uint32_t size,
                                                std::optional<Vertex> containing, std::uint64_t budget) {
  if (size < 1 || size > g.n()) throw ValidationError("connected_sets: size must lie in [1, n]");
  std::vector<std::vector<Vertex>> out;
  ConnectedSetQuery q{size, size, containing, std::numeric_limits<std::uint64_t>::max(), budget};
  visit_connected_sets(g, q, [&](const ConnectedSetView& s) {
    std::vector<Vertex> sorted(s.members.begin(), s.members.end());
    std::sort(sorted.begin(), sorted.end());
    out.push_back(std::move(sorted));
  });
  return out;
}

std::uint64_t count_connected_sets(const UndirectedGraph& g, std::uint32_t size, std::optional<Vertex> containing,
                                   std::uint64_t budget) {
  if (size < 1 || size > g.n()) throw ValidationError("count_connected_sets: size must lie in [1, n]");
  std::uint64_t count = 0;
  ConnectedSetQuery q{size, size, containing, std::numeric_limits<std::uint64_t>::max(), budget};
  visit_connected_sets(g, q, [&](const ConnectedSetView&) { ++count; });
  return count;
}

std::string to_string(SearchMode mode) { return mode == SearchMode::exact ? "exact" : "local-search"; }

SearchMode parse_search_mode(const std::string& text) {
  if (text == "exact") return SearchMode::exact;
  if (text == "local-search" || text == "local") return SearchMode::local_search;
  throw ValidationError("unknown search mode '" + text + "' (expected exact or local-search)");
}

double WindowMinimum::phi() const {
  return found ? static_cast<double>(cut) / static_cast<double>(volume) : std::numeric_limits<double>::infinity();
}

Rational WindowMinimum::inverse_square() const {
  if (!found) return 0;
  return make_rational(BigInt(volume) * volume, BigInt(cut) * cut);
}

namespace {

// a/b < c/d for positive denominators, without rounding.
bool less_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d < static_cast<unsigned __int128>(c) * b;
}

bool equal_ratio(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  return static_cast<unsigned __int128>(a) * d == static_cast<unsigned __int128>(c) * b;
}

// Keeps the best (smallest Phi, then lexicographically smallest) candidate.
void offer(WindowMinimum& best, std::uint64_t cut, std::uint64_t volume, std::span<const Vertex> members) {
  if (best.found && less_ratio(best.cut, best.volume, cut, volume)) return;
  std::vector<Vertex> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  if (best.found && equal_ratio(best.cut, best.volume, cut, volume) && !(sorted < best.witness)) return;
  best.found = true;
  best.cut = cut;
  best.volume = volume;
  best.witness = std::move(sorted);
}

WindowMinimum exact_window(const UndirectedGraph& g, std::uint64_t lo, std::uint64_t hi, std::uint32_t size_cap,
                           std::uint64_t budget) {
  WindowMinimum best;
  best.volume_lo = lo;
  best.volume_hi = hi;
  const std::uint32_t min_deg = std::max(1u, g.min_degree());
  const std::uint32_t max_deg = std::max(1u, g.max_degree());
  if (lo > hi) return best;
  // Size range implied by the volume window and the degree extremes.
  const std::uint64_t smin = std::max<std::uint64_t>(1, (lo + max_deg - 1) / max_deg);
  const std::uint64_t smax = std::min<std::uint64_t>({size_cap, hi / min_deg, g.n()});
  if (smin > smax) return best;

  ConnectedSetQuery q;
  q.min_size = static_cast<std::uint32_t>(smin);
  q.max_size = static_cast<std::uint32_t>(smax);
  q.max_volume = hi;
  q.budget = budget;
  try {
    visit_connected_sets(g, q, [&](const ConnectedSetView& s) {
      if (s.volume >= lo) offer(best, s.cut, s.volume, s.members);
    });
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded(std::string(e.what()) + "; rerun this window in local-search mode");
  }
  return best;
}

// Connected set with incrementally maintained cut/volume, for annealing.
class AnnealState {
 public:
  AnnealState(const UndirectedGraph& g) : g_(g), in_(g.n(), 0), inside_nbrs_(g.n(), 0), pos_(g.n(), 0) {}

  void add(Vertex u) {
    in_[u] = 1;
    pos_[u] = static_cast<std::uint32_t>(members_.size());
    members_.push_back(u);
    volume_ += g_.degree(u);
    cut_ = cut_ + g_.degree(u) - 2 * inside_nbrs_[u];
    for (Vertex w : g_.neighbors(u)) ++inside_nbrs_[w];
  }

  void remove(Vertex u) {
    for (Vertex w : g_.neighbors(u)) --inside_nbrs_[w];
    cut_ = cut_ + 2 * inside_nbrs_[u] - g_.degree(u);
    volume_ -= g_.degree(u);
    const Vertex last = members_.back();
    members_[pos_[u]] = last;
    pos_[last] = pos_[u];
    members_.pop_back();
    in_[u] = 0;
  }

  // Cut/volume after adding (+1) or removing (-1) u, without mutating.
  std::pair<std::uint64_t, std::uint64_t> preview(Vertex u, int dir) const {
    if (dir > 0) return {cut_ + g_.degree(u) - 2 * inside_nbrs_[u], volume_ + g_.degree(u)};
    return {cut_ + 2 * inside_nbrs_[u] - g_.degree(u), volume_ - g_.degree(u)};
  }

  // A uniformly chosen member's random outside neighbour; nullopt if the
  // probe misses (the set may be closed).
  std::optional<Vertex> random_boundary(Rng& rng) const {
    for (int attempt = 0; attempt < 16; ++attempt) {
      const Vertex v = members_[rng.below(members_.size())];
      const auto nb = g_.neighbors(v);
      const Vertex w = nb[rng.below(nb.size())];
      if (!in_[w]) return w;
    }
    for (Vertex v : members_)
      for (Vertex w : g_.neighbors(v))
        if (!in_[w]) return w;
    return std::nullopt;
  }

  // Whether S \ {u} stays connected.
  bool removable(Vertex u) const {
    if (members_.size() < 2) return false;
    std::vector<Vertex> stack;
    std::vector<char> seen(g_.n(), 0);
    const Vertex start = members_[0] == u ? members_[1] : members_[0];
    stack.push_back(start);
    seen[start] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      for (Vertex w : g_.neighbors(v))
        if (in_[w] && w != u && !seen[w]) {
          seen[w] = 1;
          ++reached;
          stack.push_back(w);
        }
    }
    return reached == members_.size() - 1;
  }

  const std::vector<Vertex>& members() const { return members_; }
  std::uint64_t cut() const { return cut_; }
  std::uint64_t volume() const { return volume_; }

 private:
  const UndirectedGraph& g_;
  std::vector<char> in_;
  std::vector<std::uint32_t> inside_nbrs_;
  std::vector<std::uint32_t> pos_;
  std::vector<Vertex> members_;
  std::uint64_t cut_ = 0;
  std::uint64_t volume_ = 0;
};

WindowMinimum anneal_window(const UndirectedGraph& g, std::uint64_t lo, std::uint64_t hi, std::uint32_t size_cap,
                            const ConductanceOptions& options) {
  WindowMinimum best;
  best.volume_lo = lo;
  best.volume_hi = hi;
  best.certified = false;
  if (lo > hi || g.n() == 0) return best;

  const auto& ls = options.local;
  const double scale = static_cast<double>(std::max<std::uint64_t>(hi, 1));
  auto energy = [&](std::uint64_t cut, std::uint64_t vol, std::size_t size) {
    double violation = 0.0;
    if (vol < lo) violation += static_cast<double>(lo - vol) / scale;
    if (vol > hi) violation += static_cast<double>(vol - hi) / scale;
    if (size > size_cap) violation += static_cast<double>(size - size_cap);
    return static_cast<double>(cut) / static_cast<double>(vol) + 2.0 * violation;
  };
  auto feasible = [&](const AnnealState& s) {
    return s.volume() >= lo && s.volume() <= hi && s.members().size() <= size_cap;
  };

  std::vector<WindowMinimum> per_restart(ls.restarts, best);
  parallel_for(
      ls.restarts,
      [&](std::size_t r) {
        WindowMinimum& mine = per_restart[r];
        Rng rng(derive_seed(ls.seed, {lo, hi, size_cap, r}));
        AnnealState s(g);
        s.add(static_cast<Vertex>(rng.below(g.n())));
        while (s.volume() < lo && s.members().size() < g.n()) {
          const auto w = s.random_boundary(rng);
          if (!w) break;
          s.add(*w);
        }
        if (feasible(s)) offer(mine, s.cut(), s.volume(), s.members());

        constexpr double kHot = 0.05, kCold = 1e-4;
        double current = energy(s.cut(), s.volume(), s.members().size());
        for (std::uint32_t it = 0; it < ls.iterations; ++it) {
          const double temperature = kHot * std::pow(kCold / kHot, static_cast<double>(it) / ls.iterations);
          Vertex u;
          int dir;
          if (rng.coin() || s.members().size() < 2) {
            const auto w = s.random_boundary(rng);
            if (!w) continue;
            u = *w;
            dir = +1;
          } else {
            u = s.members()[rng.below(s.members().size())];
            dir = -1;
          }
          const auto [cut, vol] = s.preview(u, dir);
          const double proposed = energy(cut, vol, s.members().size() + dir);
          const double delta = proposed - current;
          if (delta > 0 && rng.uniform() >= std::exp(-delta / temperature)) continue;
          if (dir < 0 && !s.removable(u)) continue;
          if (dir > 0)
            s.add(u);
          else
            s.remove(u);
          current = proposed;
          if (feasible(s)) offer(mine, s.cut(), s.volume(), s.members());
        }
      },
      options.threads ? options.threads : default_thread_count());

  for (const auto& cand : per_restart)
    if (cand.found) offer(best, cand.cut, cand.volume, cand.witness);
  return best;
}

BigInt ceil_div(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt floor_div(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::uint64_t clamp_u64(const BigInt& z) {
  if (z < 0) return 0;
  if (z > BigInt(std::to_string(std::numeric_limits<std::uint64_t>::max()))) return std::numeric_limits<std::uint64_t>::max();
  return std::stoull(z.get_str());
}

std::uint32_t dyadic_index(const Rational& x) {
  if (x.get_num() != 1) return 0;
  const auto& den = x.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return 0;
  return static_cast<std::uint32_t>(mpz_sizeinbase(den.get_mpz_t(), 2) - 1);
}

void require_connected(const UndirectedGraph& g) {
  if (g.n() == 0 || !g.is_connected()) throw ValidationError("conductance profile requires a connected graph");
}

}  // namespace

WindowMinimum min_conductance_in_window(const UndirectedGraph& g, std::uint64_t volume_lo, std::uint64_t volume_hi,
                                        std::uint32_t size_cap, const ConductanceOptions& options) {
  if (options.mode == SearchMode::exact) return exact_window(g, volume_lo, volume_hi, size_cap, options.budget);
  return anneal_window(g, volume_lo, volume_hi, size_cap, options);
}

ScaleEntry phi_at_scale(const UndirectedGraph& g, const Rational& x, const ConductanceOptions& options) {
  require_connected(g);
  if (!(x > 0 && x <= Rational(1, 2))) throw ValidationError("scale x must lie in (0, 1/2]");
  ScaleEntry entry;
  entry.x = x;
  entry.i = dyadic_index(x);
  const Rational m(static_cast<unsigned long>(g.m()));
  const std::uint64_t lo = clamp_u64(ceil_div(x * m));
  const std::uint64_t hi = clamp_u64(floor_div(2 * x * m));
  entry.min = min_conductance_in_window(g, lo, hi, g.n(), options);
  return entry;
}

ScaleEntry phi0_at_scale(const UndirectedGraph& g, const Rational& x, const Rational& c, std::uint32_t k,
                         std::uint32_t size_cap, const ConductanceOptions& options) {
  require_connected(g);
  if (x < 0) throw ValidationError("scale x must be nonnegative");
  ScaleEntry entry;
  entry.x = x;
  entry.i = dyadic_index(x);
  const Rational unit = Rational(g.n()) * (c / 2 + k);
  const std::uint64_t lo = clamp_u64(ceil_div(x * unit / 2));
  const std::uint64_t hi = clamp_u64(floor_div(4 * x * unit));
  entry.min = min_conductance_in_window(g, lo, hi, size_cap, options);
  return entry;
}

std::uint32_t ceil_log2(std::uint64_t m) {
  std::uint32_t i = 0;
  while (i < 64 && (std::uint64_t{1} << i) < m) ++i;
  return i;
}

ScaleProfile scale_profile(const UndirectedGraph& g, const ConductanceOptions& options) {
  require_connected(g);
  ScaleProfile profile;
  profile.m = g.m();
  const std::uint32_t scales = ceil_log2(g.m());
  for (std::uint32_t i = 1; i <= scales; ++i) {
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, i);
    profile.entries.push_back(phi_at_scale(g, make_rational(1, den), options));
  }
  return profile;
}

std::string ScaleProfile::to_csv() const {
  std::ostringstream out;
  out << "i,x,phi,volume_lo,volume_hi,certified,witness_size\n";
  for (const auto& e : entries) {
    out << e.i << ',' << format_double(e.x.get_d()) << ',' << format_double(e.min.phi()) << ',' << e.min.volume_lo
        << ',' << e.min.volume_hi << ',' << (e.min.certified ? "true" : "false") << ',' << e.min.witness.size()
        << '\n';
  }
  return out.str();
}

FrResult fr_bound(const UndirectedGraph& g, const ConductanceOptions& options) {
  FrResult result;
  result.profile = scale_profile(g, options);
  result.sum = 0;
  for (const auto& e : result.profile.entries) {
    result.sum += e.min.inverse_square();
    if (!e.min.certified) result.lower_estimate = true;
  }
  return result;
}

std::string FrResult::to_json() const {
  nlohmann::ordered_json j;
  j["m"] = profile.m;
  j["scales"] = profile.entries.size();
  j["sum"] = sum.get_d();
  j["sum_exact"] = nwmix::to_string(sum);
  j["lower_estimate"] = lower_estimate;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& e : profile.entries) {
    nlohmann::ordered_json row;
    row["i"] = e.i;
    row["x"] = nwmix::to_string(e.x);
    if (e.min.found) {
      row["phi"] = nwmix::to_string(make_rational(e.min.cut, e.min.volume));
      row["inverse_square"] = nwmix::to_string(e.min.inverse_square());
    } else {
      row["phi"] = "inf";
      row["inverse_square"] = "0";
    }
    row["volume_lo"] = e.min.volume_lo;
    row["volume_hi"] = e.min.volume_hi;
    row["certified"] = e.min.certified;
    row["witness"] = e.min.witness;
    rows.push_back(std::move(row));
  }
  j["profile"] = std::move(rows);
  return j.dump();
}

ExpansionFloor min_cut_per_vertex(const UndirectedGraph& g, std::uint32_t min_size, std::uint32_t max_size,
                                  std::uint64_t budget) {
  ExpansionFloor best;
  std::uint64_t best_cut = 0, best_size = 1;
  ConnectedSetQuery q;
  q.min_size = std::max(1u, min_size);
  q.max_size = max_size;
  q.budget = budget;
  visit_connected_sets(g, q, [&](const ConnectedSetView& s) {
    const std::uint64_t size = s.members.size();
    if (best.found && less_ratio(best_cut, best_size, s.cut, size)) return;
    std::vector<Vertex> sorted(s.members.begin(), s.members.end());
    std::sort(sorted.begin(), sorted.end());
    const bool better = !best.found || less_ratio(s.cut, size, best_cut, best_size) || sorted < best.witness;
    if (better) {
      best.found = true;
      best_cut = s.cut;
      best_size = size;
      best.witness = std::move(sorted);
    }
  });
  if (best.found) best.ratio = make_rational(best_cut, best_size);
  return best;
}

}  // namespace nwmix
