#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nwmix/conductance.hpp"
#include "nwmix/constants.hpp"
#include "nwmix/graph.hpp"
#include "nwmix/rational.hpp"
#include "nwmix/walk.hpp"

namespace nwmix {

/// "nwmix-<version>", stamped on every emitted row.
std::string artifact_version();

enum class StartPolicy { automatic, all_starts, sampled_starts };

std::string to_string(StartPolicy policy);
StartPolicy parse_start_policy(const std::string& text);

struct ExperimentConfig {
  std::string name;
  std::vector<std::uint32_t> n_values;
  std::uint32_t k = 1;
  Rational c = 0;
  std::uint64_t seed = 1;
  std::uint32_t reps = 1;

  std::uint64_t cap = 10'000'000;               // walk steps
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::uint32_t samples = 64;                   // sampled starts, escape runs
  std::uint64_t mc_samples = 100000;            // Monte Carlo trees per j
  std::uint32_t all_starts_limit = 1024;        // automatic policy switches above this
  StartPolicy starts = StartPolicy::automatic;
  SearchMode search = SearchMode::exact;
  bool phi0 = false;
  bool timing = false;                          // wall-time column, off by default
  unsigned threads = 0;
  std::string out;

  void validate() const;

  /// `key = value` lines; '#' starts a comment. Unknown keys are errors.
  static ExperimentConfig parse(std::string_view text);
  void apply(const std::string& key, const std::string& value);
};

/// Per-replication seed: a pure function of (master seed, n, replication).
std::uint64_t replication_seed(std::uint64_t master, std::uint32_t n, std::uint32_t rep);

GraphSpec replication_spec(const ExperimentConfig& config, std::uint32_t n, std::uint32_t rep);

struct QuietArc {
  Vertex start = 0;
  std::uint32_t length = 0;  // n when every vertex qualifies

  Vertex centre(std::uint32_t n) const { return static_cast<Vertex>((start + length / 2) % n); }
};

/// Longest cyclic run of consecutive vertices whose degree is exactly 2k.
QuietArc longest_quiet_arc(const UndirectedGraph& g, std::uint32_t k);

struct ScalingRecord {
  std::uint32_t n = 0;
  std::uint32_t rep = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t derived_seed = 0;
  std::uint64_t tau = 0;
  bool censored = false;
  StartMode mode = StartMode::all_starts;
  std::uint32_t starts = 0;
  std::uint32_t quiet_arc = 0;
  double wall_ms = 0.0;

  double log2n() const;
  double ratio() const;
};

struct ScalingSummary {
  std::uint32_t n = 0;
  std::uint32_t runs = 0;
  std::uint32_t censored = 0;
  double median_ratio = 0.0;
};

std::vector<ScalingSummary> summarize(const std::vector<ScalingRecord>& records);

struct ScalingReport {
  std::vector<ScalingRecord> records;
  std::vector<ScalingSummary> summaries;
  bool timing = false;

  bool any_censored() const;
  std::string to_csv() const;
  std::string summary_csv() const;
};

/// Mixing time per (n, replication). Replications run in parallel and are
/// merged by (n, replication). The summary is recomputed from the emitted
/// raw CSV and compared before returning.
ScalingReport run_scaling(const ExperimentConfig& config);

/// Re-derives per-n medians from raw scaling CSV text.
std::vector<ScalingSummary> summarize_csv(std::string_view raw_csv);

struct QuietArcRecord {
  std::uint32_t n = 0;
  std::uint32_t rep = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t derived_seed = 0;
  QuietArc arc;
  double threshold = 0.0;  // ln(n) / (8c), +inf when c = 0
  std::uint32_t runs = 0;
  std::uint32_t censored_runs = 0;
  double escape_median = 0.0;
  double escape_mean = 0.0;

  bool meets_threshold() const { return arc.length >= threshold; }
};

struct QuietArcReport {
  std::vector<QuietArcRecord> records;

  double fraction_meeting(std::uint32_t n) const;
  bool any_censored() const;
  std::string to_csv() const;
};

/// Longest quiet arc per sampled graph and escape times from its centre.
QuietArcReport run_quiet_arc(const ExperimentConfig& config);

struct ConductanceReport {
  GraphSpec spec;
  FrResult fr;
  std::optional<ScaleProfile> phi0;
  std::uint32_t phi0_size_cap = 0;
  std::optional<ExpansionFloor> floor;  // exact mode only

  std::string profile_csv() const;
  std::string phi0_csv() const;
  std::string to_json() const;
};

/// One graph (first n value, replication 0): Phi profile and FR sum,
/// optionally the restricted Phi_0 profile with |S| <= 9n/10.
ConductanceReport run_conductance(const ExperimentConfig& config);
ConductanceReport run_conductance(const ExperimentConfig& config, const UndirectedGraph& g);

struct CheckResult {
  std::string name;
  bool passed = false;
  bool exact = false;  // failures of exact checks are fatal
  std::string detail;
};

/// Subtree-count battery. Throws std::logic_error on a failed exact check.
std::vector<CheckResult> run_subtree_verification(const ExperimentConfig& config);
std::string format_checks(const std::vector<CheckResult>& checks);

/// ConstantSet JSON with the artifact version added.
std::string run_constants(const Rational& c, std::uint32_t k);

}  // namespace nwmix
