#include "nwmix/walk.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "nwmix/error.hpp"
#include "nwmix/kernels.hpp"
#include "nwmix/parallel.hpp"
#include "nwmix/rng.hpp"

namespace nwmix {

ProbabilityVector::ProbabilityVector(std::vector<double> weights) : weights_(std::move(weights)) {
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("probability weights must be finite and nonnegative");
    total += w;
  }
  if (std::fabs(total - 1.0) > kSumTolerance)
    throw ValidationError("probability weights sum to " + std::to_string(total) + ", not 1");
}

ProbabilityVector ProbabilityVector::point_mass(std::uint32_t n, Vertex x) {
  if (x >= n) throw ValidationError("point mass outside the vertex range");
  std::vector<double> w(n, 0.0);
  w[x] = 1.0;
  return ProbabilityVector(std::move(w));
}

namespace {

void require_connected(const UndirectedGraph& g) {
  if (g.n() == 0) throw ValidationError("empty graph");
  if (!g.is_connected()) throw ValidationError("graph is disconnected; the stationary distribution is not unique");
}

}  // namespace

ProbabilityVector stationary(const UndirectedGraph& g) {
  require_connected(g);
  std::vector<double> pi(g.n(), 1.0);
  if (g.m() > 0) {
    const double two_m = 2.0 * static_cast<double>(g.m());
    for (Vertex v = 0; v < g.n(); ++v) pi[v] = g.degree(v) / two_m;
  }
  return ProbabilityVector(std::move(pi));
}

double tv_distance(const ProbabilityVector& a, const ProbabilityVector& b) {
  if (a.size() != b.size())
    throw ValidationError("tv_distance: length mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  return kernels::active().half_l1(a.weights(), b.weights());
}

LazyKernel::LazyKernel(const UndirectedGraph& g) {
  require_connected(g);
  if (g.n() < 2) throw ValidationError("lazy kernel needs at least two vertices");
  const std::uint32_t n = g.n();
  offsets_.resize(n + 1, 0);
  targets_.reserve(2 * g.m());
  inv_two_degree_.resize(n, 0.0);
  for (Vertex v = 0; v < n; ++v) {
    const auto nb = g.neighbors(v);
    targets_.insert(targets_.end(), nb.begin(), nb.end());
    offsets_[v + 1] = static_cast<std::uint32_t>(targets_.size());
    inv_two_degree_[v] = 0.5 / static_cast<double>(nb.size());
  }
  const auto pi = stationary(g);
  pi_.assign(pi.weights().begin(), pi.weights().end());
}

void LazyKernel::apply(std::span<const double> mu, std::span<double> out, std::span<double> flow) const {
  const auto& k = kernels::active();
  k.scale(mu, inv_two_degree_, flow);
  k.lazy_gather(offsets_, targets_, mu, flow, out);
}

ProbabilityVector LazyKernel::step(const ProbabilityVector& mu) const {
  if (mu.size() != n()) throw ValidationError("step: distribution length does not match the graph");
  std::vector<double> out(n()), flow(n());
  apply(mu.weights(), out, flow);
  return ProbabilityVector(std::move(out));
}

std::vector<Rational> LazyKernel::step_exact(std::span<const Rational> mu) const {
  const std::uint32_t size = n();
  std::vector<Rational> flow(size), out(size);
  for (Vertex x = 0; x < size; ++x) flow[x] = mu[x] / (2 * degree(x));
  for (Vertex y = 0; y < size; ++y) {
    Rational acc = mu[y] / 2;
    for (std::uint32_t e = offsets_[y]; e < offsets_[y + 1]; ++e) acc += flow[targets_[e]];
    out[y] = acc;
  }
  return out;
}

std::string to_string(StartMode mode) { return mode == StartMode::all_starts ? "exact-all-starts" : "sampled-starts"; }

std::string MixingResult::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["tau"] = tau;
  j["mode"] = to_string(mode);
  if (mode == StartMode::all_starts)
    j["per_start"] = per_start;
  else
    j["per_start"] = nullptr;
  j["cap"] = cap;
  j["censored"] = censored;
  return j.dump();
}

std::vector<Vertex> select_starts(std::uint32_t n, const MixingOptions& options) {
  std::vector<Vertex> starts;
  if (options.mode == StartMode::all_starts || options.sample_size >= n) {
    starts.resize(n);
    for (Vertex v = 0; v < n; ++v) starts[v] = v;
  } else {
    std::vector<char> chosen(n, 0);
    std::uint64_t draw = 0;
    while (starts.size() < options.sample_size) {
      Rng rng(derive_seed(options.seed, {draw++}));
      const auto v = static_cast<Vertex>(rng.below(n));
      if (!chosen[v]) {
        chosen[v] = 1;
        starts.push_back(v);
      }
    }
  }
  for (Vertex v : options.extra_starts) {
    if (v >= n) throw ValidationError("extra start vertex out of range");
    starts.push_back(v);
  }
  std::sort(starts.begin(), starts.end());
  starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
  return starts;
}

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr std::uint64_t kDriftCheckPeriod = 64;

// Returns the number of steps to mix from `start`, or nullopt if `cap` steps
// were not enough.
std::optional<std::uint64_t> mix_from(const LazyKernel& kernel, Vertex start, double threshold, std::uint64_t cap) {
  const std::uint32_t n = kernel.n();
  const auto& table = kernels::active();
  const std::span<const double> pi = kernel.stationary_weights();
  std::vector<double> cur(n, 0.0), next(n), flow(n);
  cur[start] = 1.0;
  double tv = table.half_l1(cur, pi);
  if (tv <= threshold) return 0;
  for (std::uint64_t t = 1; t <= cap; ++t) {
    kernel.apply(cur, next, flow);
    cur.swap(next);
    const double next_tv = table.half_l1(cur, pi);
    if (next_tv > tv + kMonotoneSlack)
      throw std::logic_error("total variation increased along a lazy walk (start " + std::to_string(start) +
                             ", step " + std::to_string(t) + ")");
    tv = next_tv;
    if (t % kDriftCheckPeriod == 0 || tv <= threshold) {
      if (std::fabs(table.sum(cur) - 1.0) > ProbabilityVector::kSumTolerance)
        throw std::runtime_error("probability mass drifted beyond 1e-12 at step " + std::to_string(t));
    }
    if (tv <= threshold) return t;
  }
  return std::nullopt;
}

}  // namespace

MixingResult mixing_time(const UndirectedGraph& g, const MixingOptions& options) {
  if (options.cap < 1) throw ValidationError("mixing cap must be >= 1");
  if (!(options.threshold > 0.0 && options.threshold < 1.0)) throw ValidationError("threshold must lie in (0, 1)");
  const LazyKernel kernel(g);

  MixingResult result;
  result.n = g.n();
  result.mode = options.mode;
  result.cap = options.cap;
  result.starts = select_starts(g.n(), options);
  result.per_start.assign(result.starts.size(), 0);
  std::vector<char> censored(result.starts.size(), 0);

  parallel_for(
      result.starts.size(),
      [&](std::size_t i) {
        const auto steps = mix_from(kernel, result.starts[i], options.threshold, options.cap);
        result.per_start[i] = steps.value_or(options.cap);
        censored[i] = !steps.has_value();
      },
      options.threads ? options.threads : default_thread_count());

  for (std::size_t i = 0; i < result.starts.size(); ++i) {
    result.tau = std::max(result.tau, result.per_start[i]);
    result.censored = result.censored || censored[i];
  }
  return result;
}

std::optional<std::uint64_t> mixing_time_from_exact(const LazyKernel& kernel, Vertex start, const Rational& threshold,
                                                    std::uint64_t cap) {
  const std::uint32_t n = kernel.n();
  std::uint64_t two_m = 0;
  for (Vertex v = 0; v < n; ++v) two_m += kernel.degree(v);
  std::vector<Rational> pi(n);
  for (Vertex v = 0; v < n; ++v) pi[v] = make_rational(kernel.degree(v), static_cast<unsigned long>(two_m));
  std::vector<Rational> mu(n, 0);
  mu[start] = 1;
  auto tv = [&] {
    Rational acc = 0;
    for (Vertex v = 0; v < n; ++v) acc += abs(mu[v] - pi[v]);
    return Rational(acc / 2);
  };
  if (tv() <= threshold) return 0;
  for (std::uint64_t t = 1; t <= cap; ++t) {
    mu = kernel.step_exact(mu);
    if (tv() <= threshold) return t;
  }
  return std::nullopt;
}

std::vector<Vertex> simulate_walk(const UndirectedGraph& g, Vertex start, std::uint64_t steps, std::uint64_t seed) {
  if (start >= g.n()) throw ValidationError("start vertex out of range");
  std::vector<Vertex> path;
  path.reserve(steps + 1);
  path.push_back(start);
  Rng rng(derive_seed(seed, {start}));
  Vertex cur = start;
  for (std::uint64_t t = 0; t < steps; ++t) {
    if (!rng.coin()) {
      const auto nb = g.neighbors(cur);
      if (!nb.empty()) cur = nb[rng.below(nb.size())];
    }
    path.push_back(cur);
  }
  return path;
}

EscapeResult escape_time(const UndirectedGraph& g, Vertex start, std::span<const char> inside, std::uint64_t seed,
                         std::uint64_t cap) {
  if (inside.size() != g.n()) throw ValidationError("escape_time: membership mask length does not match the graph");
  if (start >= g.n() || !inside[start]) throw ValidationError("escape_time: start must lie inside the region");
  if (std::all_of(inside.begin(), inside.end(), [](char c) { return c != 0; })) return {cap, true};
  Rng rng(derive_seed(seed, {start}));
  Vertex cur = start;
  for (std::uint64_t t = 1; t <= cap; ++t) {
    if (!rng.coin()) {
      const auto nb = g.neighbors(cur);
      if (!nb.empty()) cur = nb[rng.below(nb.size())];
    }
    if (!inside[cur]) return {t, false};
  }
  return {cap, true};
}

}  // namespace nwmix
