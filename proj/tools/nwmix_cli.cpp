#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "nwmix/conductance.hpp"
#include "nwmix/constants.hpp"
#include "nwmix/error.hpp"
#include "nwmix/experiments.hpp"
#include "nwmix/graph.hpp"
#include "nwmix/kernels.hpp"
#include "nwmix/subtrees.hpp"
#include "nwmix/walk.hpp"

namespace {

using namespace nwmix;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitValidation = 2;
constexpr int kExitPartial = 3;

// Flags that map one-to-one onto config-file keys. Collected as strings and
// applied after the config file so that flags win.
struct SharedFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
};

void add_flag(CLI::App* app, SharedFlags& flags, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      "--" + key, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
}

void add_common(CLI::App* app, SharedFlags& flags) {
  app->add_option("--config", flags.config_path, "key = value file; flags override its entries");
  add_flag(app, flags, "n", "vertex count (comma-separated grid for experiments)");
  add_flag(app, flags, "k", "ring half-width");
  add_flag(app, flags, "c", "shortcut parameter, p = c/n (exact, e.g. 5 or 7/2)");
  add_flag(app, flags, "seed", "master seed");
  add_flag(app, flags, "reps", "replications per n");
  add_flag(app, flags, "budget", "enumeration budget (sets visited)");
  add_flag(app, flags, "cap", "walk step cap");
  add_flag(app, flags, "mode", "search mode: exact | local-search");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("write to " + path + " failed");
}

ExperimentConfig resolve(const SharedFlags& flags) {
  ExperimentConfig config;
  if (!flags.config_path.empty()) config = ExperimentConfig::parse(read_file(flags.config_path));
  for (const auto& [key, value] : flags.values) config.apply(key, value);
  return config;
}

UndirectedGraph load_or_sample(const std::string& graph_path, const ExperimentConfig& config) {
  if (!graph_path.empty()) return read_graph(graph_path);
  if (config.n_values.size() != 1) throw ValidationError("give exactly one --n (or --graph)");
  GraphSpec spec{config.n_values.front(), config.k, config.c, config.seed};
  spec.validate();
  return sample_small_world(spec);
}

std::string with_suffix(const std::string& out, const std::string& suffix) {
  if (out.empty() || out == "-") return {};
  return out + suffix;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Newman-Watts small-world mixing experiments"};
  app.set_version_flag("--version", nwmix::artifact_version());
  app.require_subcommand(1);
  std::string kernels = "auto";
  app.add_option("--kernels", kernels, "vector kernels: auto | scalar | avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  SharedFlags flags;
  std::string out_path;
  std::string graph_path;
  int status = kExitOk;

  auto* generate = app.add_subcommand("generate", "sample H_{n,k,c/n} and write its edge list");
  add_common(generate, flags);
  generate->add_option("--out", out_path, "output path (stdout when omitted)");

  auto* mix = app.add_subcommand("mix", "lazy-walk mixing time as JSON");
  add_common(mix, flags);
  mix->add_option("--graph", graph_path, "edge-list file instead of sampling");
  mix->add_option("--out", out_path, "output path");
  add_flag(mix, flags, "starts", "auto | all | sampled");
  add_flag(mix, flags, "samples", "sampled start count");

  auto* conductance = app.add_subcommand("conductance", "connected conductance profile as CSV");
  add_common(conductance, flags);
  conductance->add_option("--graph", graph_path, "edge-list file instead of sampling");
  conductance->add_option("--out", out_path, "CSV path; the JSON report goes to <out>.json");
  add_flag(conductance, flags, "phi0", "also compute the size-capped profile (true/false)");

  auto* fr = app.add_subcommand("fr-bound", "sum of Phi^-2 over dyadic scales as JSON");
  add_common(fr, flags);
  fr->add_option("--graph", graph_path, "edge-list file instead of sampling");
  fr->add_option("--out", out_path, "output path");

  auto* subtrees = app.add_subcommand("subtrees", "GW subtree-count series or the verification battery");
  add_common(subtrees, flags);
  std::string law_text;
  std::uint32_t order = 10;
  bool verify = false;
  bool count_series = false;
  subtrees->add_option("--law", law_text, "offspring law, e.g. poisson:7/2 or binomial-plus:50:1/10:2");
  subtrees->add_option("--order", order, "highest j")->check(CLI::Range(0u, 2000u));
  subtrees->add_flag("--count", count_series, "expected subtree counts instead of the ordered-moment series");
  subtrees->add_flag("--verify", verify, "run the check battery instead of printing a series");
  subtrees->add_option("--out", out_path, "output path");
  add_flag(subtrees, flags, "mc_samples", "Monte Carlo trees per j");

  auto* constants = app.add_subcommand("constants", "proof constants for (c, k) as JSON");
  add_common(constants, flags);
  constants->add_option("--out", out_path, "output path");

  auto* scaling = app.add_subcommand("scaling", "mixing time across an n grid (CSV)");
  add_common(scaling, flags);
  scaling->add_option("--out", out_path, "CSV path; the summary goes to <out>.summary.csv");
  add_flag(scaling, flags, "starts", "auto | all | sampled");
  add_flag(scaling, flags, "samples", "sampled start count");
  add_flag(scaling, flags, "timing", "add a wall_ms column (true/false)");
  add_flag(scaling, flags, "threads", "worker threads");

  auto* quiet = app.add_subcommand("quiet-arc", "longest shortcut-free arc and escape times (CSV)");
  add_common(quiet, flags);
  quiet->add_option("--out", out_path, "output path");
  add_flag(quiet, flags, "samples", "escape walks per graph");
  add_flag(quiet, flags, "threads", "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (kernels != "auto" &&
      !nwmix::kernels::force_isa(kernels == "avx2" ? nwmix::kernels::Isa::avx2 : nwmix::kernels::Isa::scalar)) {
    std::cerr << "error: " << kernels << " kernels are not available on this machine\n";
    return kExitValidation;
  }

  try {
    ExperimentConfig config = resolve(flags);

    if (generate->parsed()) {
      const UndirectedGraph g = load_or_sample("", config);
      std::ostringstream text;
      write_graph(g, text);
      write_output(out_path, text.str());
    } else if (mix->parsed()) {
      const UndirectedGraph g = load_or_sample(graph_path, config);
      MixingOptions opts;
      opts.cap = config.cap;
      opts.threads = config.threads;
      const bool sampled = config.starts == StartPolicy::sampled_starts ||
                           (config.starts == StartPolicy::automatic && g.n() > config.all_starts_limit);
      if (sampled) {
        opts.mode = StartMode::sampled_starts;
        opts.sample_size = config.samples;
        opts.seed = config.seed;
        const QuietArc arc = longest_quiet_arc(g, config.k);
        if (arc.length >= 2) opts.extra_starts.push_back(arc.centre(g.n()));
      }
      const MixingResult result = mixing_time(g, opts);
      write_output(out_path, result.to_json() + "\n");
      if (result.censored) status = kExitPartial;
    } else if (conductance->parsed()) {
      const UndirectedGraph g = load_or_sample(graph_path, config);
      ConductanceReport report = run_conductance(config, g);
      if (graph_path.empty()) report.spec.seed = config.seed;
      write_output(out_path, report.profile_csv());
      if (const auto json_path = with_suffix(out_path, ".json"); !json_path.empty())
        write_output(json_path, report.to_json() + "\n");
      if (report.phi0)
        if (const auto p = with_suffix(out_path, ".phi0.csv"); !p.empty()) write_output(p, report.phi0_csv());
    } else if (fr->parsed()) {
      const UndirectedGraph g = load_or_sample(graph_path, config);
      ConductanceOptions opts;
      opts.mode = config.search;
      opts.budget = config.budget;
      opts.local.seed = config.seed;
      opts.threads = config.threads;
      write_output(out_path, fr_bound(g, opts).to_json() + "\n");
    } else if (subtrees->parsed()) {
      if (verify) {
        if (config.n_values.empty()) config.n_values = {14};
        const auto checks = run_subtree_verification(config);
        write_output(out_path, format_checks(checks));
      } else {
        if (law_text.empty()) throw ValidationError("--law is required unless --verify is given");
        const OffspringLaw law = parse_law(law_text);
        const CoeffSeq seq = count_series ? subtree_count_sequence(law, order) : coefficient_sequence(law, order);
        write_output(out_path, sequence_csv(seq, growth_constant(law)));
      }
    } else if (constants->parsed()) {
      write_output(out_path, run_constants(config.c, config.k) + "\n");
    } else if (scaling->parsed()) {
      const ScalingReport report = run_scaling(config);
      write_output(out_path, report.to_csv());
      const auto summary_path = with_suffix(out_path, ".summary.csv");
      if (summary_path.empty())
        std::cerr << report.summary_csv();
      else
        write_output(summary_path, report.summary_csv());
      if (report.any_censored()) status = kExitPartial;
    } else if (quiet->parsed()) {
      const QuietArcReport report = run_quiet_arc(config);
      write_output(out_path, report.to_csv());
      if (report.any_censored()) status = kExitPartial;
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kExitPartial;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::logic_error& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return kExitFatal;
  }
  return status;
}
