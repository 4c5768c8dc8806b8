#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nwmix/graph.hpp"
#include "nwmix/rational.hpp"

namespace nwmix {

/// A distribution over vertices. Construction checks nonnegativity and that
/// the weights sum to 1 within 1e-12; nothing is ever renormalized.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbabilityVector(std::vector<double> weights);
  static ProbabilityVector point_mass(std::uint32_t n, Vertex x);

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const noexcept { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  std::vector<double> weights_;
};

/// pi(x) = degree(x) / 2m. Throws ValidationError on a disconnected graph.
ProbabilityVector stationary(const UndirectedGraph& g);

double tv_distance(const ProbabilityVector& a, const ProbabilityVector& b);

/// Lazy simple random walk: hold with probability 1/2, otherwise move to a
/// uniform neighbour. Copies the topology into CSR form, so the source graph
/// need not outlive the kernel. Requires a connected graph.
class LazyKernel {
 public:
  explicit LazyKernel(const UndirectedGraph& g);

  std::uint32_t n() const noexcept { return static_cast<std::uint32_t>(inv_two_degree_.size()); }
  const std::vector<double>& stationary_weights() const noexcept { return pi_; }

  /// out = mu P. `flow` is scratch of length n.
  void apply(std::span<const double> mu, std::span<double> out, std::span<double> flow) const;
  ProbabilityVector step(const ProbabilityVector& mu) const;

  /// Exact-rational step for oracle comparisons.
  std::vector<Rational> step_exact(std::span<const Rational> mu) const;

  std::span<const std::uint32_t> offsets() const noexcept { return offsets_; }
  std::span<const std::uint32_t> targets() const noexcept { return targets_; }
  std::uint32_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> targets_;
  std::vector<double> inv_two_degree_;
  std::vector<double> pi_;
};

enum class StartMode { all_starts, sampled_starts };

std::string to_string(StartMode mode);

struct MixingOptions {
  StartMode mode = StartMode::all_starts;
  std::uint32_t sample_size = 64;  // sampled_starts only
  std::uint64_t seed = 0;          // sampled_starts only
  std::vector<Vertex> extra_starts;  // always included (e.g. a quiet-arc centre)
  std::uint64_t cap = 10'000'000;
  double threshold = 0.25;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct MixingResult {
  std::uint32_t n = 0;
  std::uint64_t tau = 0;
  StartMode mode = StartMode::all_starts;
  std::vector<Vertex> starts;
  std::vector<std::uint64_t> per_start;  // steps to mix; cap when censored
  std::uint64_t cap = 0;
  bool censored = false;

  /// {"n","tau","mode","per_start" (null in sampled mode),"cap","censored"}
  std::string to_json() const;
};

/// Steps until tv(mu_k, pi) <= threshold, one start at a time with a sparse
/// vector-matrix product per step. Along every run the TV sequence is checked
/// to be non-increasing (1e-12 slack) and the mass drift to stay under 1e-12.
MixingResult mixing_time(const UndirectedGraph& g, const MixingOptions& options = {});

/// Same minimal-k search, in exact rationals. Intended for n <= 64.
std::optional<std::uint64_t> mixing_time_from_exact(const LazyKernel& kernel, Vertex start, const Rational& threshold,
                                                    std::uint64_t cap);

/// Start vertices used in sampled mode: distinct uniform draws keyed by
/// (seed, draw index) followed by the extra starts, deduplicated, sorted.
std::vector<Vertex> select_starts(std::uint32_t n, const MixingOptions& options);

std::vector<Vertex> simulate_walk(const UndirectedGraph& g, Vertex start, std::uint64_t steps, std::uint64_t seed);

struct EscapeResult {
  std::uint64_t steps = 0;
  bool censored = false;
};

/// First time a lazy walk from `start` leaves the vertex set marked in
/// `inside`. Censored at `cap` steps (also when the complement is empty).
EscapeResult escape_time(const UndirectedGraph& g, Vertex start, std::span<const char> inside, std::uint64_t seed,
                         std::uint64_t cap = 10'000'000);

}  // namespace nwmix
