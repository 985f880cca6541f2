#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "hkout/analytics.hpp"
#include "hkout/connectivity.hpp"
#include "hkout/model.hpp"
#include "hkout/params.hpp"
#include "hkout/rng.hpp"

namespace hkout {

/// Inclusive on both ends: {2, 10, 2} visits 2, 4, 6, 8, 10.
struct K2Range {
  std::uint32_t start = 2;
  std::uint32_t stop = 2;
  std::uint32_t step = 1;

  std::vector<std::uint32_t> values() const {
    std::vector<std::uint32_t> out;
    for (std::uint64_t v = start; v <= stop; v += step) out.push_back(static_cast<std::uint32_t>(v));
    return out;
  }
};

struct ExperimentConfig {
  std::uint32_t n = 500;
  std::vector<double> mu_list;
  std::vector<std::uint32_t> k_list;
  std::optional<K2Range> k2_range;  // empty: 2 .. 2*threshold, capped at n-1
  std::uint32_t trials = 1000;
  std::uint64_t master_seed = 1;
  unsigned parallelism = 1;
  std::uint32_t k1 = 1;
};

struct SweepRow {
  std::uint32_t n = 0;
  double mu = 0.0;
  std::uint32_t k = 0;
  std::uint32_t k2 = 0;
  std::uint32_t trials = 0;
  std::uint64_t master_seed = 0;
  double p_mindeg = 0.0;
  double p_kconn = 0.0;
  double ci_halfwidth = 0.0;
  double mean_degree_emp = 0.0;
  std::int64_t threshold_k2 = -1;  // -1 where the threshold is undefined
  bool valid = true;
  std::string error;
};

struct TrialOutcome {
  bool min_degree_ok = false;
  bool k_connected = false;
  std::uint64_t edges = 0;
};

inline std::uint64_t trial_seed(std::uint64_t master_seed, std::uint64_t mu_index, std::uint64_t k_index,
                                std::uint64_t k2, std::uint64_t trial) {
  return derive_seed(master_seed, mu_index, k_index, k2, trial);
}

/// Threshold for the sweep row, or -1 when k < 2, mu = 1 or n < 3.
inline std::int64_t row_threshold(std::uint32_t n, double mu, std::uint32_t k) {
  if (k < 2 || n < 3 || !(mu >= 0.0 && mu < 1.0)) return -1;
  return threshold_k2(n, mu, k);
}

inline TrialOutcome run_trial(const ModelParams& params, std::uint32_t k, std::uint64_t seed) {
  RandomStream stream(seed);
  const Graph g = build_graph(draw_selection_table(params, stream));
  TrialOutcome out;
  out.edges = g.edge_count();
  out.min_degree_ok = min_degree(g) >= k;
  // Short-circuit keeps the indicators nested: k-connected implies min degree >= k.
  out.k_connected = out.min_degree_ok && is_k_vertex_connected(g, k);
  return out;
}

/// Per-trial records in trial order. Each worker writes only its own slots,
/// so the result does not depend on parallelism.
inline std::vector<TrialOutcome> run_trials(const ModelParams& params, std::uint32_t k, std::uint32_t trials,
                                            std::uint64_t master_seed, std::uint64_t mu_index = 0,
                                            std::uint64_t k_index = 0, unsigned parallelism = 1) {
  const ModelParams p = validate_params(params);
  if (k == 0) throw std::invalid_argument("k must be >= 1");
  std::vector<TrialOutcome> out(trials);
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    try {
      for (std::uint32_t t; !failed.load() && (t = next.fetch_add(1)) < trials;)
        out[t] = run_trial(p, k, trial_seed(master_seed, mu_index, k_index, p.k2, t));
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  const unsigned workers = std::clamp<unsigned>(parallelism, 1, std::max<std::uint32_t>(trials, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

inline double ci_halfwidth_95(double p_hat, std::uint32_t trials) {
  return 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / trials);
}

inline SweepRow summarize(const ModelParams& params, std::uint32_t k, std::uint64_t master_seed,
                          const std::vector<TrialOutcome>& outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("no trials to summarize");
  std::uint64_t mindeg = 0, kconn = 0, edges = 0;
  for (const auto& o : outcomes) {
    mindeg += o.min_degree_ok;
    kconn += o.k_connected;
    edges += o.edges;
  }
  const auto trials = static_cast<std::uint32_t>(outcomes.size());
  SweepRow row;
  row.n = params.n;
  row.mu = params.mu;
  row.k = k;
  row.k2 = params.k2;
  row.trials = trials;
  row.master_seed = master_seed;
  row.p_mindeg = static_cast<double>(mindeg) / trials;
  row.p_kconn = static_cast<double>(kconn) / trials;
  // The wider of the two intervals, so one column covers both curves.
  row.ci_halfwidth = std::max(ci_halfwidth_95(row.p_mindeg, trials), ci_halfwidth_95(row.p_kconn, trials));
  row.mean_degree_emp = 2.0 * static_cast<double>(edges) / (static_cast<double>(trials) * params.n);
  row.threshold_k2 = row_threshold(params.n, params.mu, k);
  return row;
}

inline SweepRow run_point(const ModelParams& params, std::uint32_t k, std::uint32_t trials,
                          std::uint64_t master_seed, std::uint64_t mu_index = 0, std::uint64_t k_index = 0,
                          unsigned parallelism = 1) {
  if (trials == 0) throw std::invalid_argument("trials must be >= 1");
  return summarize(params, k, master_seed,
                   run_trials(params, k, trials, master_seed, mu_index, k_index, parallelism));
}

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.mu_list.empty()) throw std::invalid_argument("mu_list is empty");
  if (cfg.k_list.empty()) throw std::invalid_argument("k_list is empty");
  for (auto k : cfg.k_list)
    if (k < 1) throw std::invalid_argument("k_list entries must be >= 1");
  if (cfg.k2_range) {
    if (cfg.k2_range->step < 1) throw std::invalid_argument("k2_range step must be >= 1");
    if (cfg.k2_range->start > cfg.k2_range->stop) throw std::invalid_argument("k2_range is empty");
  }
}

/// Explicit range, or 2 .. 2*max threshold over the (mu, k) grid, capped at n-1.
inline std::vector<std::uint32_t> sweep_k2_values(const ExperimentConfig& cfg) {
  if (cfg.k2_range) return cfg.k2_range->values();
  std::int64_t top = 0;
  for (double mu : cfg.mu_list)
    for (auto k : cfg.k_list) top = std::max(top, row_threshold(cfg.n, mu, k));
  const std::int64_t cap = cfg.n >= 2 ? static_cast<std::int64_t>(cfg.n) - 1 : 2;
  const std::int64_t stop = top > 0 ? std::min<std::int64_t>(2 * top, cap) : cap;
  return K2Range{2, static_cast<std::uint32_t>(std::max<std::int64_t>(stop, 2)), 1}.values();
}

using ProgressFn = std::function<void(const SweepRow& row, std::size_t done, std::size_t total)>;

/// Rows ordered mu-major, then k, then k2. A failing point becomes an
/// invalid row and the sweep moves on.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const ProgressFn& progress = {}) {
  validate_config(cfg);
  const auto k2s = sweep_k2_values(cfg);
  const std::size_t total = cfg.mu_list.size() * cfg.k_list.size() * k2s.size();
  std::vector<SweepRow> rows;
  rows.reserve(total);
  for (std::size_t mi = 0; mi < cfg.mu_list.size(); ++mi) {
    for (std::size_t ki = 0; ki < cfg.k_list.size(); ++ki) {
      for (auto k2 : k2s) {
        ModelParams p;
        p.n = cfg.n;
        p.mu = cfg.mu_list[mi];
        p.k1 = cfg.k1;
        p.k2 = k2;
        const std::uint32_t k = cfg.k_list[ki];
        SweepRow row;
        try {
          row = run_point(p, k, cfg.trials, cfg.master_seed, mi, ki, cfg.parallelism);
        } catch (const std::exception& e) {
          row = SweepRow{};
          row.n = p.n;
          row.mu = p.mu;
          row.k = k;
          row.k2 = k2;
          row.trials = cfg.trials;
          row.master_seed = cfg.master_seed;
          row.p_mindeg = row.p_kconn = row.ci_halfwidth = row.mean_degree_emp = std::nan("");
          row.threshold_k2 = row_threshold(p.n, p.mu, k);
          row.valid = false;
          row.error = e.what();
        }
        rows.push_back(std::move(row));
        if (progress) progress(rows.back(), rows.size(), total);
      }
    }
  }
  return rows;
}

inline constexpr const char* kCsvHeader =
    "n,mu,k,k2,trials,master_seed,p_mindeg,p_kconn,ci_halfwidth,mean_degree_emp,threshold_k2";

namespace detail {

inline void put_fixed(std::string& line, double v) {
  if (std::isnan(v)) {
    line += "nan";
    return;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  line += buf;
}

}  // namespace detail

/// Invalid rows print "nan" in the estimate columns.
inline void write_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    std::string line = std::to_string(r.n) + ',';
    detail::put_fixed(line, r.mu);
    line += ',' + std::to_string(r.k) + ',' + std::to_string(r.k2) + ',' + std::to_string(r.trials) + ',' +
            std::to_string(r.master_seed);
    for (double v : {r.p_mindeg, r.p_kconn, r.ci_halfwidth, r.mean_degree_emp}) {
      line += ',';
      detail::put_fixed(line, v);
    }
    line += ',' + std::to_string(r.threshold_k2);
    os << line << '\n';
  }
  if (!os) throw std::runtime_error("failed writing CSV");
}

inline void write_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(rows, os);
  os.flush();
  if (!os) throw std::runtime_error("failed writing " + path);
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw std::runtime_error("CSV header mismatch");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 11) throw std::runtime_error("line " + std::to_string(lineno) + ": expected 11 fields");
    try {
      SweepRow r;
      r.n = static_cast<std::uint32_t>(std::stoul(f[0]));
      r.mu = std::stod(f[1]);
      r.k = static_cast<std::uint32_t>(std::stoul(f[2]));
      r.k2 = static_cast<std::uint32_t>(std::stoul(f[3]));
      r.trials = static_cast<std::uint32_t>(std::stoul(f[4]));
      r.master_seed = std::stoull(f[5]);
      r.p_mindeg = std::stod(f[6]);
      r.p_kconn = std::stod(f[7]);
      r.ci_halfwidth = std::stod(f[8]);
      r.mean_degree_emp = std::stod(f[9]);
      r.threshold_k2 = std::stoll(f[10]);
      r.valid = !std::isnan(r.p_mindeg);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw std::runtime_error("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  return rows;
}

}  // namespace hkout
