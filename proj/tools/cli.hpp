#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hkout/hkout.hpp"

namespace hkout::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr double kValidationTolerance = 1e-9;
inline constexpr const char* kParallelismEnv = "HKOUT_PARALLELISM";

/// Bad input from the user: reported and mapped to the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline const char* yes_no(bool b) { return b ? "true" : "false"; }

inline ModelParams checked_params(std::uint32_t n, double mu, std::uint32_t k1, std::uint32_t k2) {
  ModelParams p;
  p.n = n;
  p.mu = mu;
  p.k1 = k1;
  p.k2 = k2;
  try {
    return validate_params(p);
  } catch (const ParamError& e) {
    throw UsageError(e.what());
  }
}

// ---- experiment config -------------------------------------------------

inline std::optional<unsigned> parallelism_from_env() {
  const char* raw = std::getenv(kParallelismEnv);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long v = std::strtoul(raw, &end, 10);
  if (*end != '\0' || v < 1 || v > 1024)
    throw UsageError(std::string(kParallelismEnv) + " must be an integer in [1, 1024]");
  return static_cast<unsigned>(v);
}

/// Parses the JSON config. Unknown keys are rejected so typos do not pass silently.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("experiment config must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "n") {
        cfg.n = value.get<std::uint32_t>();
      } else if (key == "mu_list") {
        cfg.mu_list = value.get<std::vector<double>>();
      } else if (key == "k_list") {
        cfg.k_list = value.get<std::vector<std::uint32_t>>();
      } else if (key == "k2_range") {
        K2Range r;
        if (value.is_array()) {
          const auto v = value.get<std::vector<std::uint32_t>>();
          if (v.size() != 2 && v.size() != 3) throw UsageError("k2_range array must be [start, stop] or [start, stop, step]");
          r.start = v[0];
          r.stop = v[1];
          r.step = v.size() == 3 ? v[2] : 1;
        } else {
          r.start = value.at("start").get<std::uint32_t>();
          r.stop = value.at("stop").get<std::uint32_t>();
          r.step = value.value("step", 1U);
        }
        cfg.k2_range = r;
      } else if (key == "trials") {
        cfg.trials = value.get<std::uint32_t>();
      } else if (key == "master_seed") {
        cfg.master_seed = value.get<std::uint64_t>();
      } else if (key == "parallelism") {
        cfg.parallelism = value.get<unsigned>();
      } else if (key == "k1") {
        cfg.k1 = value.get<std::uint32_t>();
      } else {
        throw UsageError("unknown config key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("config key \"" + key + "\": " + e.what());
    }
  }
  return cfg;
}

// ---- subcommands --------------------------------------------------------

struct GenerateArgs {
  std::uint32_t n = 0;
  double mu = 0;
  std::uint32_t k1 = 1;
  std::uint32_t k2 = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "edgelist";
};

inline int run_generate(const GenerateArgs& a, std::ostream& out) {
  const ModelParams p = checked_params(a.n, a.mu, a.k1, a.k2);
  const Realization r = generate(p, a.seed);
  std::uint32_t type1 = 0;
  for (auto t : r.selections.types) type1 += t == NodeType::Type1;
  const Graph& g = r.graph;

  if (!a.out.empty()) {
    std::ofstream os(a.out, std::ios::binary);
    if (!os) throw UsageError("cannot open " + a.out + " for writing");
    if (a.format == "dot")
      write_dot(os, g, &r.selections);
    else
      write_edge_list(os, g);
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + a.out);
  }

  out << "nodes: " << g.node_count() << '\n'
      << "mu: " << fmt(p.mu) << '\n'
      << "k1: " << p.k1 << '\n'
      << "k2: " << p.k2 << '\n'
      << "seed: " << a.seed << '\n'
      << "type-1 nodes: " << type1 << '\n'
      << "type-2 nodes: " << g.node_count() - type1 << '\n'
      << "edges: " << g.edge_count() << '\n'
      << "keys: " << r.keys.key_count() << '\n'
      << "mean degree: " << fmt(2.0 * static_cast<double>(g.edge_count()) / g.node_count()) << '\n'
      << "min degree: " << min_degree(g) << '\n';
  if (!a.out.empty()) out << "wrote " << a.format << ": " << a.out << '\n';
  return kExitOk;
}

inline int run_check(const std::string& in, std::uint32_t k, std::ostream& out) {
  std::ifstream is(in);
  if (!is) throw UsageError("cannot read " + in);
  Graph g;
  try {
    g = read_edge_list(is);
  } catch (const FormatError& e) {
    throw UsageError(in + ": " + e.what());
  }
  const ConnectivityReport r = analyze_connectivity(g, k);
  out << "nodes: " << g.node_count() << '\n'
      << "edges: " << g.edge_count() << '\n'
      << "min degree: " << r.min_degree << '\n'
      << "connected: " << yes_no(r.is_connected) << '\n'
      << "k: " << k << '\n'
      << "k-connected: " << yes_no(r.is_k_vertex_connected) << '\n';
  return kExitOk;
}

struct AnalyticsArgs {
  std::uint32_t n = 0;
  double mu = 0;
  std::uint32_t k2 = 0;
  std::uint32_t k = 2;
  std::string csv;
};

inline int run_analytics(const AnalyticsArgs& a, std::ostream& out) {
  const ModelParams p = checked_params(a.n, a.mu, 1, a.k2);
  const double mean_k = mean_selection(p.mu, p.k2);
  out << "n: " << p.n << '\n'
      << "mu: " << fmt(p.mu) << '\n'
      << "k2: " << p.k2 << '\n'
      << "k: " << a.k << '\n'
      << "mean selections <K>: " << fmt(mean_k) << '\n'
      << "edge probability: " << fmt(edge_probability(p.n, mean_k), 9) << '\n'
      << "mean degree: " << fmt(mean_degree(p.n, mean_k)) << '\n';
  if (p.n >= 3 && a.k >= 2) {
    out << "gamma: " << fmt(gamma_from_scaling(p.n, p.mu, p.k2, a.k).gamma) << '\n';
    if (p.mu < 1.0) out << "threshold k2: " << threshold_k2(p.n, p.mu, a.k) << '\n';
    if (p.mu > 0.0 && degree_pmf(p.n, p.mu, p.k2, NodeType::Type1, a.k - 1) > 0.0)
      out << "second moment ratio: " << fmt(second_moment_ratio(p.n, p.mu, p.k2, a.k)) << '\n';
  }
  out << "E[Z] at d=k-1: " << sci(expected_count_Z(p.n, p.mu, p.k2, a.k - 1)) << '\n';

  struct Row {
    std::uint32_t d;
    double t1, t2, z;
  };
  std::vector<Row> rows;
  for (std::uint32_t d = 0; d < p.n; ++d)
    rows.push_back({d, degree_pmf(p.n, p.mu, p.k2, NodeType::Type1, d),
                    degree_pmf(p.n, p.mu, p.k2, NodeType::Type2, d), expected_count_Z(p.n, p.mu, p.k2, d)});

  // Terminal table trims the negligible tail; the CSV keeps every degree.
  out << "degree pmf (rows with E[Z] >= 1e-12):\n"
      << "  d  P[deg=d|type-1]  P[deg=d|type-2]  E[Z]\n";
  for (const auto& r : rows)
    if (r.z >= 1e-12)
      out << "  " << r.d << "  " << sci(r.t1) << "  " << sci(r.t2) << "  " << sci(r.z) << '\n';

  if (!a.csv.empty()) {
    std::ofstream os(a.csv, std::ios::binary);
    if (!os) throw UsageError("cannot open " + a.csv + " for writing");
    os << "d,pmf_type1,pmf_type2,expected_Z\n";
    for (const auto& r : rows) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g\n", r.d, r.t1, r.t2, r.z);
      os << buf;
    }
    if (!os) throw std::runtime_error("failed writing " + a.csv);
    out << "wrote pmf table: " << a.csv << '\n';
  }
  return kExitOk;
}

inline int run_threshold(std::uint32_t n, double mu, std::uint32_t k, std::ostream& out) {
  if (n < 3) throw UsageError("threshold needs n >= 3");
  if (!(mu >= 0.0 && mu < 1.0)) throw UsageError("threshold needs 0 <= mu < 1");
  out << threshold_k2(n, mu, k) << '\n';
  return kExitOk;
}

struct ExperimentArgs {
  std::string config;
  std::string out;
  std::optional<std::uint32_t> n, trials, k2_start, k2_stop, k2_step, k1;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> parallelism;
  std::vector<double> mu;
  std::vector<std::uint32_t> k;
  bool quiet = false;
};

inline ExperimentConfig resolve_experiment_config(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  bool parallelism_in_file = false;
  if (!a.config.empty()) {
    std::ifstream probe(a.config);
    if (!probe) throw UsageError("cannot read config " + a.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(probe);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config " + a.config + ": " + e.what());
    }
    cfg = parse_experiment_config(j);
    parallelism_in_file = j.is_object() && j.contains("parallelism");
  }
  if (!parallelism_in_file)
    if (auto env = parallelism_from_env()) cfg.parallelism = *env;

  if (a.n) cfg.n = *a.n;
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.parallelism) cfg.parallelism = *a.parallelism;
  if (a.k1) cfg.k1 = *a.k1;
  if (!a.mu.empty()) cfg.mu_list = a.mu;
  if (!a.k.empty()) cfg.k_list = a.k;
  if (a.k2_start || a.k2_stop || a.k2_step) {
    K2Range r = cfg.k2_range.value_or(K2Range{});
    if (a.k2_start) r.start = *a.k2_start;
    if (a.k2_stop) r.stop = *a.k2_stop;
    if (a.k2_step) r.step = *a.k2_step;
    if (!cfg.k2_range && (!a.k2_start || !a.k2_stop))
      throw UsageError("--k2-start and --k2-stop are both needed without a k2_range in the config");
    cfg.k2_range = r;
  }

  try {
    validate_config(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (cfg.parallelism < 1) throw UsageError("parallelism must be >= 1");
  return cfg;
}

inline int run_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const ExperimentConfig cfg = resolve_experiment_config(a);
  const auto rows = run_sweep(cfg, [&](const SweepRow& r, std::size_t done, std::size_t total) {
    if (a.quiet) return;
    err << "[" << done << "/" << total << "] mu=" << fmt(r.mu, 3) << " k=" << r.k << " k2=" << r.k2;
    if (r.valid)
      err << " p_mindeg=" << fmt(r.p_mindeg, 3) << " p_kconn=" << fmt(r.p_kconn, 3) << '\n';
    else
      err << " invalid: " << r.error << '\n';
  });
  write_csv(rows, a.out);

  std::size_t invalid = 0;
  for (const auto& r : rows) invalid += !r.valid;
  out << "rows: " << rows.size() << '\n'
      << "invalid rows: " << invalid << '\n'
      << "parallelism: " << cfg.parallelism << '\n'
      << "wrote csv: " << a.out << '\n';
  for (const auto& r : rows)
    if (!r.valid) out << "invalid row mu=" << fmt(r.mu) << " k=" << r.k << " k2=" << r.k2 << ": " << r.error << '\n';
  return invalid == 0 ? kExitOk : kExitFailure;
}

inline int run_validate(std::uint32_t max_n, std::ostream& out) {
  const auto checks = run_formula_checks(validation_grid_up_to(max_n));
  out << "quantity                 n  mu     k2  argument           formula               oracle                "
         "abs error\n";
  for (const auto& c : checks) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-24s %-2u %-6.3f %-3u %-18s %-21.15e %-21.15e %.3e\n", c.quantity.c_str(), c.n,
                  c.mu, c.k2, c.argument.c_str(), c.formula, c.oracle, c.abs_error());
    out << buf;
  }
  const double worst = max_abs_error(checks);
  out << "checks: " << checks.size() << '\n'
      << "max abs error: " << sci(worst) << '\n'
      << "tolerance: " << sci(kValidationTolerance) << '\n'
      << (worst <= kValidationTolerance ? "validation: PASS" : "validation: FAIL") << '\n';
  return worst <= kValidationTolerance ? kExitOk : kExitFailure;
}

// ---- dispatch -----------------------------------------------------------

inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Inhomogeneous random K-out graphs: generation, connectivity, analytics, sweeps", "hkout"};
  app.require_subcommand(1, 1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Sample one graph and print a summary");
  generate_cmd->add_option("--n", gen.n, "Number of nodes")->required()->check(CLI::Range(2U, 1U << 24));
  generate_cmd->add_option("--mu", gen.mu, "Probability a node is type-1")->required()->check(CLI::Range(0.0, 1.0));
  generate_cmd->add_option("--k1", gen.k1, "Selections per type-1 node")->capture_default_str()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--k2", gen.k2, "Selections per type-2 node")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  generate_cmd->add_option("--out", gen.out, "Write the graph here");
  generate_cmd->add_option("--format", gen.format, "Format of --out")
      ->capture_default_str()
      ->check(CLI::IsMember({"edgelist", "dot"}));

  std::string check_in;
  std::uint32_t check_k = 1;
  auto* check_cmd = app.add_subcommand("check", "Connectivity report for an edge-list file");
  check_cmd->add_option("--in", check_in, "Edge-list file")->required();
  check_cmd->add_option("--k", check_k, "Target vertex connectivity")->required()->check(CLI::PositiveNumber);

  AnalyticsArgs ana;
  auto* analytics_cmd = app.add_subcommand("analytics", "Closed-form quantities for (n, mu, k2)");
  analytics_cmd->add_option("--n", ana.n, "Number of nodes")->required()->check(CLI::Range(2U, 1U << 24));
  analytics_cmd->add_option("--mu", ana.mu, "Probability a node is type-1")->required()->check(CLI::Range(0.0, 1.0));
  analytics_cmd->add_option("--k2", ana.k2, "Selections per type-2 node")->required()->check(CLI::PositiveNumber);
  analytics_cmd->add_option("--k", ana.k, "Target connectivity")->capture_default_str()->check(CLI::PositiveNumber);
  analytics_cmd->add_option("--csv", ana.csv, "Write the full degree pmf table here");

  std::uint32_t th_n = 0, th_k = 0;
  double th_mu = 0;
  auto* threshold_cmd = app.add_subcommand("threshold", "Smallest k2 at the critical scaling");
  threshold_cmd->add_option("--n", th_n, "Number of nodes")->required()->check(CLI::Range(3U, 1U << 30));
  threshold_cmd->add_option("--mu", th_mu, "Probability a node is type-1")->required()->check(CLI::Range(0.0, 1.0));
  threshold_cmd->add_option("--k", th_k, "Target connectivity")->required()->check(CLI::Range(2U, 1U << 20));

  ExperimentArgs ex;
  auto* experiment_cmd = app.add_subcommand("experiment", "Monte-Carlo sweep over mu, k and k2");
  experiment_cmd->add_option("--config", ex.config, "JSON config");
  experiment_cmd->add_option("--out", ex.out, "CSV output")->required();
  experiment_cmd->add_option("--n", ex.n, "Override n")->check(CLI::Range(2U, 1U << 24));
  experiment_cmd->add_option("--mu", ex.mu, "Override mu_list")->delimiter(',')->check(CLI::Range(0.0, 1.0));
  experiment_cmd->add_option("--k", ex.k, "Override k_list")->delimiter(',')->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--k2-start", ex.k2_start, "Override k2_range start")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--k2-stop", ex.k2_stop, "Override k2_range stop")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--k2-step", ex.k2_step, "Override k2_range step")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--k1", ex.k1, "Override k1")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--trials", ex.trials, "Override trials")->check(CLI::PositiveNumber);
  experiment_cmd->add_option("--seed", ex.seed, "Override master_seed");
  experiment_cmd->add_option("--parallelism", ex.parallelism, "Worker threads")->check(CLI::Range(1U, 1024U));
  experiment_cmd->add_flag("--quiet", ex.quiet, "No progress on stderr");

  std::uint32_t max_n = 6;
  auto* validate_cmd = app.add_subcommand("validate", "Formulas against exhaustive enumeration");
  validate_cmd->add_option("--max-n", max_n, "Largest n enumerated")->capture_default_str()->check(CLI::Range(3U, 6U));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << app.get_subcommands().front()->help();
    } else {
      err << app.help();
    }
    return kExitUsage;
  }

  try {
    if (*generate_cmd) return run_generate(gen, out);
    if (*check_cmd) return run_check(check_in, check_k, out);
    if (*analytics_cmd) return run_analytics(ana, out);
    if (*threshold_cmd) return run_threshold(th_n, th_mu, th_k, out);
    if (*experiment_cmd) return run_experiment(ex, out, err);
    if (*validate_cmd) return run_validate(max_n, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace hkout::cli
