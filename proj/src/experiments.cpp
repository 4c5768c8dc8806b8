#include "nwmix/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nwmix/error.hpp"
#include "nwmix/parallel.hpp"
#include "nwmix/rng.hpp"
#include "nwmix/subtrees.hpp"

#ifndef NWMIX_VERSION
#define NWMIX_VERSION "0.0.0"
#endif

namespace nwmix {

std::string artifact_version() { return std::string("nwmix-") + NWMIX_VERSION; }

std::string to_string(StartPolicy policy) {
  switch (policy) {
    case StartPolicy::automatic: return "auto";
    case StartPolicy::all_starts: return "all";
    case StartPolicy::sampled_starts: return "sampled";
  }
  return "auto";
}

StartPolicy parse_start_policy(const std::string& text) {
  if (text == "auto") return StartPolicy::automatic;
  if (text == "all" || text == "exact-all-starts") return StartPolicy::all_starts;
  if (text == "sampled" || text == "sampled-starts") return StartPolicy::sampled_starts;
  throw ValidationError("unknown start policy '" + text + "' (auto, all, sampled)");
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_unsigned(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end || value.empty())
    throw ValidationError(key + ": expected a nonnegative integer, got '" + value + "'");
  if (out > std::numeric_limits<T>::max()) throw ValidationError(key + ": value " + value + " out of range");
  return static_cast<T>(out);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError(key + ": expected true or false, got '" + value + "'");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

unsigned outer_threads(const ExperimentConfig& config) {
  return config.threads ? config.threads : default_thread_count();
}

}  // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
  if (key == "name" || key == "experiment") {
    name = value;
  } else if (key == "n") {
    n_values.clear();
    std::stringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) n_values.push_back(parse_unsigned<std::uint32_t>("n", trim(item)));
  } else if (key == "k") {
    k = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "c") {
    c = parse_rational(value);
  } else if (key == "seed") {
    seed = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "reps") {
    reps = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "cap") {
    cap = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "budget") {
    budget = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "samples") {
    samples = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "mc_samples") {
    mc_samples = parse_unsigned<std::uint64_t>(key, value);
  } else if (key == "all_starts_limit") {
    all_starts_limit = parse_unsigned<std::uint32_t>(key, value);
  } else if (key == "starts") {
    starts = parse_start_policy(value);
  } else if (key == "mode") {
    search = parse_search_mode(value);
  } else if (key == "phi0") {
    phi0 = parse_bool(key, value);
  } else if (key == "timing") {
    timing = parse_bool(key, value);
  } else if (key == "threads") {
    threads = parse_unsigned<unsigned>(key, value);
  } else if (key == "out") {
    out = value;
  } else {
    throw ValidationError("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  ExperimentConfig config;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    try {
      config.apply(key, value);
    } catch (const ValidationError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return config;
}

void ExperimentConfig::validate() const {
  if (n_values.empty()) throw ValidationError("the n grid is empty");
  if (reps < 1) throw ValidationError("reps must be >= 1");
  if (cap < 1) throw ValidationError("cap must be >= 1");
  for (std::uint32_t n : n_values) {
    GraphSpec spec{n, k, c, seed};
    spec.validate();
  }
}

std::uint64_t replication_seed(std::uint64_t master, std::uint32_t n, std::uint32_t rep) {
  return derive_seed(master, {n, rep});
}

GraphSpec replication_spec(const ExperimentConfig& config, std::uint32_t n, std::uint32_t rep) {
  return GraphSpec{n, config.k, config.c, replication_seed(config.seed, n, rep)};
}

QuietArc longest_quiet_arc(const UndirectedGraph& g, std::uint32_t k) {
  const std::uint32_t n = g.n();
  QuietArc best;
  if (n == 0) return best;
  auto quiet = [&](Vertex v) { return g.degree(v) == 2 * k; };

  Vertex first_loud = n;
  for (Vertex v = 0; v < n; ++v)
    if (!quiet(v)) {
      first_loud = v;
      break;
    }
  if (first_loud == n) return {0, n};

  // Walk once around the cycle starting just after a loud vertex so no run wraps.
  std::uint32_t run = 0;
  Vertex run_start = 0;
  for (std::uint32_t step = 1; step <= n; ++step) {
    const Vertex v = (first_loud + step) % n;
    if (quiet(v)) {
      if (run == 0) run_start = v;
      ++run;
      if (run > best.length || (run == best.length && run_start < best.start)) best = {run_start, run};
    } else {
      run = 0;
    }
  }
  return best;
}

double ScalingRecord::log2n() const {
  const double l = std::log(static_cast<double>(n));
  return l * l;
}

double ScalingRecord::ratio() const { return static_cast<double>(tau) / log2n(); }

std::vector<ScalingSummary> summarize(const std::vector<ScalingRecord>& records) {
  std::vector<ScalingSummary> out;
  std::vector<double> ratios;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (out.empty() || out.back().n != r.n) {
      if (!out.empty()) out.back().median_ratio = median(std::move(ratios));
      ratios.clear();
      out.push_back({r.n, 0, 0, 0.0});
    }
    ++out.back().runs;
    if (r.censored) ++out.back().censored;
    ratios.push_back(r.ratio());
  }
  if (!out.empty()) out.back().median_ratio = median(std::move(ratios));
  return out;
}

bool ScalingReport::any_censored() const {
  return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.censored; });
}

std::string ScalingReport::to_csv() const {
  std::ostringstream out;
  out << "n,rep,master_seed,derived_seed,tau,censored,ln2n,ratio,mode,starts,quiet_arc,version";
  if (timing) out << ",wall_ms";
  out << '\n';
  const std::string version = artifact_version();
  for (const auto& r : records) {
    out << r.n << ',' << r.rep << ',' << r.master_seed << ',' << r.derived_seed << ',' << r.tau << ','
        << (r.censored ? "true" : "false") << ',' << format_double(r.log2n()) << ',' << format_double(r.ratio())
        << ',' << to_string(r.mode) << ',' << r.starts << ',' << r.quiet_arc << ',' << version;
    if (timing) out << ',' << format_double(r.wall_ms);
    out << '\n';
  }
  return out.str();
}

std::string ScalingReport::summary_csv() const {
  std::ostringstream out;
  out << "n,runs,censored,median_ratio,version\n";
  const std::string version = artifact_version();
  for (const auto& s : summaries)
    out << s.n << ',' << s.runs << ',' << s.censored << ',' << format_double(s.median_ratio) << ',' << version << '\n';
  return out.str();
}

std::vector<ScalingSummary> summarize_csv(std::string_view raw_csv) {
  std::istringstream in{std::string(raw_csv)};
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("scaling CSV is empty");
  std::vector<std::string> header;
  {
    std::stringstream h(line);
    std::string col;
    while (std::getline(h, col, ',')) header.push_back(col);
  }
  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ValidationError("scaling CSV lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t n_col = column("n"), tau_col = column("tau"), cens_col = column("censored");

  std::vector<ScalingRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string f;
    while (std::getline(row, f, ',')) fields.push_back(f);
    if (fields.size() != header.size()) throw ParseError(line_no, "wrong number of fields");
    ScalingRecord r;
    r.n = parse_unsigned<std::uint32_t>("n", fields[n_col]);
    r.tau = parse_unsigned<std::uint64_t>("tau", fields[tau_col]);
    r.censored = fields[cens_col] == "true";
    records.push_back(r);
  }
  return summarize(records);
}

ScalingReport run_scaling(const ExperimentConfig& config) {
  config.validate();
  const std::size_t per_n = config.reps;
  const std::size_t jobs = config.n_values.size() * per_n;
  const unsigned threads = outer_threads(config);
  const unsigned inner = jobs >= threads ? 1 : threads;

  ScalingReport report;
  report.timing = config.timing;
  report.records.resize(jobs);
  parallel_for(
      jobs,
      [&](std::size_t job) {
        const std::uint32_t n = config.n_values[job / per_n];
        const auto rep = static_cast<std::uint32_t>(job % per_n);
        const auto t0 = std::chrono::steady_clock::now();
        const GraphSpec spec = replication_spec(config, n, rep);
        const UndirectedGraph g = sample_small_world(spec);

        MixingOptions opts;
        opts.cap = config.cap;
        opts.threads = inner;
        const bool sampled = config.starts == StartPolicy::sampled_starts ||
                             (config.starts == StartPolicy::automatic && n > config.all_starts_limit);
        const QuietArc arc = longest_quiet_arc(g, config.k);
        if (sampled) {
          opts.mode = StartMode::sampled_starts;
          opts.sample_size = config.samples;
          opts.seed = derive_seed(spec.seed, {0x7374617274ULL});
          if (arc.length >= 2) opts.extra_starts.push_back(arc.centre(n));
        }
        const MixingResult mix = mixing_time(g, opts);

        ScalingRecord& r = report.records[job];
        r.n = n;
        r.rep = rep;
        r.master_seed = config.seed;
        r.derived_seed = spec.seed;
        r.tau = mix.tau;
        r.censored = mix.censored;
        r.mode = mix.mode;
        r.starts = static_cast<std::uint32_t>(mix.starts.size());
        r.quiet_arc = arc.length;
        if (config.timing) r.wall_ms = elapsed_ms(t0);
      },
      threads);

  report.summaries = summarize(report.records);
  const auto rederived = summarize_csv(report.to_csv());
  if (rederived.size() != report.summaries.size()) throw std::logic_error("scaling summary does not match raw rows");
  for (std::size_t i = 0; i < rederived.size(); ++i) {
    const auto& a = rederived[i];
    const auto& b = report.summaries[i];
    if (a.n != b.n || a.runs != b.runs || a.censored != b.censored ||
        format_double(a.median_ratio) != format_double(b.median_ratio))
      throw std::logic_error("scaling summary for n=" + std::to_string(b.n) + " does not match raw rows");
  }
  return report;
}

double QuietArcReport::fraction_meeting(std::uint32_t n) const {
  std::uint32_t total = 0, meeting = 0;
  for (const auto& r : records)
    if (r.n == n) {
      ++total;
      if (r.meets_threshold()) ++meeting;
    }
  return total ? static_cast<double>(meeting) / total : 0.0;
}

bool QuietArcReport::any_censored() const {
  return std::any_of(records.begin(), records.end(), [](const auto& r) { return r.censored_runs > 0; });
}

std::string QuietArcReport::to_csv() const {
  std::ostringstream out;
  out << "n,rep,master_seed,derived_seed,arc_start,arc_length,threshold,meets,runs,censored_runs,escape_median,"
         "escape_mean,version\n";
  const std::string version = artifact_version();
  for (const auto& r : records) {
    out << r.n << ',' << r.rep << ',' << r.master_seed << ',' << r.derived_seed << ',' << r.arc.start << ','
        << r.arc.length << ',' << format_double(r.threshold) << ',' << (r.meets_threshold() ? "true" : "false")
        << ',' << r.runs << ',' << r.censored_runs << ',' << format_double(r.escape_median) << ','
        << format_double(r.escape_mean) << ',' << version << '\n';
  }
  return out.str();
}

QuietArcReport run_quiet_arc(const ExperimentConfig& config) {
  config.validate();
  const std::size_t per_n = config.reps;
  const std::size_t jobs = config.n_values.size() * per_n;
  QuietArcReport report;
  report.records.resize(jobs);
  const double c = config.c.get_d();

  parallel_for(
      jobs,
      [&](std::size_t job) {
        const std::uint32_t n = config.n_values[job / per_n];
        const auto rep = static_cast<std::uint32_t>(job % per_n);
        const GraphSpec spec = replication_spec(config, n, rep);
        const UndirectedGraph g = sample_small_world(spec);

        QuietArcRecord& r = report.records[job];
        r.n = n;
        r.rep = rep;
        r.master_seed = config.seed;
        r.derived_seed = spec.seed;
        r.arc = longest_quiet_arc(g, config.k);
        r.threshold = c > 0 ? std::log(static_cast<double>(n)) / (8.0 * c) : std::numeric_limits<double>::infinity();
        if (r.arc.length < 2) {
          r.arc.length = 0;
          return;
        }

        std::vector<char> inside(n, 0);
        for (std::uint32_t i = 0; i < r.arc.length; ++i) inside[(r.arc.start + i) % n] = 1;
        const Vertex centre = r.arc.centre(n);
        std::vector<double> times;
        times.reserve(config.samples);
        double sum = 0.0;
        for (std::uint32_t run = 0; run < config.samples; ++run) {
          const EscapeResult e = escape_time(g, centre, inside, derive_seed(spec.seed, {run}), config.cap);
          if (e.censored) ++r.censored_runs;
          times.push_back(static_cast<double>(e.steps));
          sum += static_cast<double>(e.steps);
        }
        r.runs = config.samples;
        if (!times.empty()) {
          r.escape_mean = sum / static_cast<double>(times.size());
          r.escape_median = median(std::move(times));
        }
      },
      outer_threads(config));
  return report;
}

ConductanceReport run_conductance(const ExperimentConfig& config) {
  config.validate();
  const GraphSpec spec = replication_spec(config, config.n_values.front(), 0);
  ConductanceReport report = run_conductance(config, sample_small_world(spec));
  report.spec = spec;
  return report;
}

ConductanceReport run_conductance(const ExperimentConfig& config, const UndirectedGraph& g) {
  ConductanceReport report;
  report.spec = GraphSpec{g.n(), config.k, config.c, config.seed};
  ConductanceOptions opts;
  opts.mode = config.search;
  opts.budget = config.budget;
  opts.local.seed = config.seed;
  opts.threads = config.threads;
  report.fr = fr_bound(g, opts);

  if (config.phi0) {
    report.phi0_size_cap = static_cast<std::uint32_t>((9ull * g.n()) / 10);
    ScaleProfile profile;
    profile.m = g.m();
    const std::uint32_t scales = ceil_log2(g.m());
    for (std::uint32_t i = 1; i <= scales; ++i) {
      BigInt den;
      mpz_ui_pow_ui(den.get_mpz_t(), 2, i);
      ScaleEntry e = phi0_at_scale(g, make_rational(1, den), config.c, config.k, report.phi0_size_cap, opts);
      e.i = i;
      profile.entries.push_back(std::move(e));
    }
    report.phi0 = std::move(profile);
  }
  if (config.search == SearchMode::exact && g.n() >= 2)
    report.floor = min_cut_per_vertex(g, 1, report.phi0_size_cap ? report.phi0_size_cap : g.n() - 1, config.budget);
  return report;
}

std::string ConductanceReport::profile_csv() const { return fr.profile.to_csv(); }

std::string ConductanceReport::phi0_csv() const { return phi0 ? phi0->to_csv() : std::string(); }

std::string ConductanceReport::to_json() const {
  nlohmann::ordered_json j;
  j["version"] = artifact_version();
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["c"] = to_string(spec.c);
  j["seed"] = spec.seed;
  j["fr"] = nlohmann::ordered_json::parse(fr.to_json());
  if (phi0) {
    j["phi0_size_cap"] = phi0_size_cap;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& e : phi0->entries) {
      rows.push_back({{"i", e.i},
                      {"phi", e.min.found ? to_string(make_rational(e.min.cut, e.min.volume)) : "inf"},
                      {"volume_lo", e.min.volume_lo},
                      {"volume_hi", e.min.volume_hi},
                      {"certified", e.min.certified}});
    }
    j["phi0"] = std::move(rows);
  }
  if (floor) {
    const Rational reference = spec.c / 12;
    j["cut_per_vertex"] = {{"found", floor->found},
                           {"min_ratio", floor->found ? to_string(floor->ratio) : "inf"},
                           {"c_over_12", to_string(reference)},
                           {"at_least_c_over_12", !floor->found || floor->ratio >= reference},
                           {"witness", floor->witness}};
  }
  return j.dump(2);
}

namespace {

std::vector<OffspringLaw> battery_laws() {
  return {PoissonLaw{1},
          PoissonLaw{Rational(7, 2)},
          BinomialLaw{50, Rational(1, 10)},
          BinomialPlusLaw{50, Rational(1, 10), 2},
          DeterministicLaw{3},
          ExplicitLaw{{Rational(1, 2), Rational(0), Rational(1, 2)}}};
}

}  // namespace

std::vector<CheckResult> run_subtree_verification(const ExperimentConfig& config) {
  std::vector<CheckResult> checks;
  auto exact = [&](std::string name, bool ok, std::string detail) {
    checks.push_back({std::move(name), ok, true, std::move(detail)});
    if (!ok) throw std::logic_error("exact check failed: " + checks.back().name + " (" + checks.back().detail + ")");
  };

  constexpr std::uint32_t kOrder = 30;
  for (const auto& law : battery_laws()) {
    // Both constructors throw on any disagreement between the two routes.
    const CoeffSeq ordered = coefficient_sequence(law, kOrder);
    const CoeffSeq counts = subtree_count_sequence(law, kOrder);
    exact("lagrange-vs-functional " + describe(law), ordered.mu.size() == kOrder + 1 && counts.mu.size() == kOrder + 1,
          "ordered and subtree-count series, J=30");
    std::uint32_t bad = 0;
    for (std::uint32_t j = 1; j <= kOrder; ++j)
      if (counts.mu[j] > ordered.mu[j]) bad = j;
    exact("ordered-dominates-count " + describe(law), bad == 0, bad ? "j=" + std::to_string(bad) : "j<=30");
  }

  for (const Rational& c : {Rational(1), Rational(7, 2)}) {
    const auto ordered = coefficient_sequence(PoissonLaw{c}, kOrder).mu;
    const auto counts = subtree_count_sequence(PoissonLaw{c}, kOrder).mu;
    std::uint32_t bad = 0, bad_count = 0;
    for (std::uint32_t j = 1; j <= kOrder; ++j) {
      if (ordered[j] != poisson_mu_closed_form(c, j)) bad = j;
      if (counts[j] != poisson_subtree_closed_form(c, j)) bad_count = j;
    }
    exact("poisson-closed-form ordered c=" + to_string(c), bad == 0,
          bad ? "mismatch j=" + std::to_string(bad) : "c^(j-1)/j C(2j-2,j-1), j<=30");
    exact("poisson-closed-form count c=" + to_string(c), bad_count == 0,
          bad_count ? "mismatch j=" + std::to_string(bad_count) : "(cj)^(j-1)/j!, j<=30");
  }
  {
    const auto counts = subtree_count_sequence(DeterministicLaw{3}, kOrder).mu;
    std::uint32_t bad = 0;
    for (std::uint32_t j = 1; j <= kOrder; ++j)
      if (counts[j] != deterministic_mu_closed_form(3, j)) bad = j;
    exact("deterministic-closed-form count d=3", bad == 0,
          bad ? "mismatch j=" + std::to_string(bad) : "C(3j,j-1)/j, j<=30");
  }
  {
    const auto mu = coefficient_sequence(PoissonLaw{1}, 6).mu;
    const std::vector<Rational> catalan = {1, 1, 2, 5, 14, 42};
    bool ok = true;
    for (std::uint32_t j = 1; j <= 6; ++j) ok = ok && mu[j] == catalan[j - 1];
    exact("catalan q_j=1", ok, "mu_1..6 = 1,1,2,5,14,42");
  }
  {
    bool ok = true;
    std::string where;
    for (const auto& law : battery_laws()) {
      const Rational C = growth_constant(law);
      const auto seq = coefficient_sequence(law, 25);
      for (std::uint32_t j = 1; j <= 25 && ok; ++j) {
        if (seq.q[j] > pow(C, j)) continue;  // hypothesis fails; nothing to check
        if (!(seq.mu[j] <= mu_upper_bound(C, j) && (j < 2 || mu_upper_bound(C, j) < mu_coarse_bound(C, j)))) {
          ok = false;
          where = describe(law) + " j=" + std::to_string(j);
        }
      }
    }
    exact("subtree-bound j<=25", ok, ok ? "all laws" : where);
  }

  for (std::uint32_t j = 1; j <= 5; ++j) {
    const auto est = brute_force_mu(PoissonLaw{1}, j, config.mc_samples, derive_seed(config.seed, {0x6d63ULL}),
                                    config.threads);
    const double truth = poisson_subtree_closed_form(1, j).get_d();
    const double z = est.stderr_ > 0 ? std::fabs(est.mean - truth) / est.stderr_ : (est.mean == truth ? 0.0 : 1e9);
    std::ostringstream detail;
    detail << "mean=" << format_double(est.mean) << " exact=" << format_double(truth) << " z=" << format_double(z);
    checks.push_back({"monte-carlo poisson:1 j=" + std::to_string(j), z <= 3.0, false, detail.str()});
  }

  {
    const std::uint32_t n = config.n_values.empty() ? 14 : config.n_values.front();
    const std::uint32_t graphs = config.reps;
    const BinomialPlusLaw tree_law{n - 2 * config.k - 1, config.c / n, 2 * config.k};
    const auto mu = subtree_count_sequence(tree_law, 6).mu;
    std::vector<std::vector<double>> means(graphs, std::vector<double>(7, 0.0));
    parallel_for(
        graphs,
        [&](std::size_t s) {
          const UndirectedGraph g = sample_small_world(replication_spec(config, n, static_cast<std::uint32_t>(s)));
          for (std::uint32_t j = 1; j <= 6; ++j) {
            std::uint64_t total = 0;
            for (Vertex v = 0; v < n; ++v) total += count_Bjv(g, v, j, config.budget);
            means[s][j] = static_cast<double>(total) / n;
          }
        },
        outer_threads(config));
    for (std::uint32_t j = 1; j <= 6; ++j) {
      double mean = 0.0, m2 = 0.0;
      for (std::uint32_t s = 0; s < graphs; ++s) {
        const double d = means[s][j] - mean;
        mean += d / (s + 1);
        m2 += d * (means[s][j] - mean);
      }
      const double se = graphs > 1 ? std::sqrt(m2 / (graphs - 1) / graphs) : 0.0;
      const double bound = bjv_bound(config.c, config.k, j).get_d();
      const double tree = mu[j].get_d();
      std::ostringstream detail;
      detail << "mean=" << format_double(mean) << " se=" << format_double(se) << " bound=" << format_double(bound)
             << " tree_mu=" << format_double(tree);
      checks.push_back({"Bjv n=" + std::to_string(n) + " j=" + std::to_string(j),
                        mean <= bound && mean <= tree + 3.0 * se, false, detail.str()});
    }
  }
  return checks;
}

std::string format_checks(const std::vector<CheckResult>& checks) {
  std::ostringstream out;
  for (const auto& c : checks) out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  return out.str();
}

std::string run_constants(const Rational& c, std::uint32_t k) {
  auto j = nlohmann::ordered_json::parse(solve_constants(c, k).to_json());
  j["version"] = artifact_version();
  return j.dump(2);
}

}  // namespace nwmix
