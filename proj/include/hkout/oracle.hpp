#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hkout/analytics.hpp"
#include "hkout/connectivity.hpp"
#include "hkout/graph.hpp"
#include "hkout/model.hpp"
#include "hkout/params.hpp"

// Exhaustive enumeration of the whole probability space at small n: every
// type assignment with weight mu^#type1 (1-mu)^#type2 and every combination
// of selection sets with weight prod 1 / C(n-1, K_t). Ground truth for the
// closed forms in analytics.hpp and for Monte-Carlo estimates.

namespace hkout {

inline constexpr std::uint32_t kOracleMaxNodes = kBruteForceMaxNodes;

struct EnumerationBudget {
  std::uint32_t max_n = 6;
  std::uint64_t max_outcomes = 100'000'000;
};

class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nodes whose types are fixed. The enumeration only visits matching type
/// assignments and renormalizes, so no outcome is ever rejected.
struct TypeCondition {
  std::vector<std::pair<NodeId, NodeType>> fixed;
};

/// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      carry_ += (sum_ - t) + x;
    else
      carry_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

namespace detail {

/// All size-`size` subsets of {0..n-1} \ {self}, ascending as bitmasks.
inline std::vector<std::uint32_t> selection_masks(std::uint32_t n, std::uint32_t self, std::uint32_t size) {
  std::vector<std::uint32_t> out;
  const std::uint32_t width = n - 1;
  const std::uint32_t low = (1U << self) - 1;
  for (std::uint32_t s = (1U << size) - 1; s < (1U << width);) {
    out.push_back((s & low) | ((s & ~low) << 1));
    const std::uint32_t c = s & (~s + 1);
    const std::uint32_t next = s + c;
    s = (((next ^ s) >> 2) / c) | next;
  }
  return out;
}

}  // namespace detail

class Outcome;

template <typename Visitor>
void for_each_outcome(const ModelParams& params, const TypeCondition& cond, Visitor&& visit,
                      const EnumerationBudget& budget = {});

/// One point of the probability space, held as bitmasks.
class Outcome {
 public:
  std::uint32_t node_count() const noexcept { return n_; }
  NodeType type(NodeId v) const noexcept {
    return (type1_ >> v) & 1U ? NodeType::Type1 : NodeType::Type2;
  }
  bool picks(NodeId i, NodeId j) const noexcept { return (selected_[i] >> j) & 1U; }
  bool adjacent(NodeId i, NodeId j) const noexcept { return (adjacency_[i] >> j) & 1U; }
  std::uint32_t degree(NodeId v) const noexcept { return std::popcount(adjacency_[v]); }

  std::uint32_t min_degree() const noexcept {
    std::uint32_t best = n_;
    for (NodeId v = 0; v < n_; ++v) best = std::min(best, degree(v));
    return best;
  }

  bool k_connected(std::uint32_t k) const { return detail::masks_k_connected(adjacency_, n_, k); }

  SelectionTable selection_table() const {
    SelectionTable t;
    t.types.resize(n_);
    t.selections.resize(n_);
    for (NodeId i = 0; i < n_; ++i) {
      t.types[i] = type(i);
      for (NodeId j = 0; j < n_; ++j)
        if (picks(i, j)) t.selections[i].push_back(j);
    }
    return t;
  }

  Graph graph() const {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n_; ++i)
      for (NodeId j = i + 1; j < n_; ++j)
        if (adjacent(i, j)) e.emplace_back(i, j);
    return Graph(n_, std::move(e));
  }

 private:
  template <typename Visitor>
  friend void for_each_outcome(const ModelParams&, const TypeCondition&, Visitor&&, const EnumerationBudget&);

  void rebuild_adjacency() noexcept {
    for (NodeId i = 0; i < n_; ++i) adjacency_[i] = selected_[i];
    for (NodeId j = 0; j < n_; ++j)
      for (std::uint32_t s = selected_[j]; s; s &= s - 1) adjacency_[std::countr_zero(s)] |= 1U << j;
  }

  std::uint32_t n_ = 0;
  std::uint32_t type1_ = 0;
  detail::AdjacencyMasks selected_{};
  detail::AdjacencyMasks adjacency_{};
};

/// Number of outcomes a full enumeration would visit under `cond`.
inline std::uint64_t outcome_count(const ModelParams& params, const TypeCondition& cond = {}) {
  const ModelParams p = validate_params(params);
  if (p.n > kOracleMaxNodes) return ~std::uint64_t{0};
  auto choose = [](std::uint64_t N, std::uint64_t j) {
    std::uint64_t c = 1;
    for (std::uint64_t i = 1; i <= j; ++i) c = c * (N - j + i) / i;
    return c;
  };
  const std::uint64_t c1 = p.mu > 0.0 ? choose(p.n - 1, p.k1) : 0;
  const std::uint64_t c2 = p.mu < 1.0 ? choose(p.n - 1, p.k2) : 0;
  long double total = 1;
  for (NodeId v = 0; v < p.n; ++v) {
    std::uint64_t per = c1 + c2;
    for (const auto& [node, t] : cond.fixed)
      if (node == v) per = t == NodeType::Type1 ? c1 : c2;
    total *= static_cast<long double>(per);
  }
  return total > 1.8e19L ? ~std::uint64_t{0} : static_cast<std::uint64_t>(total);
}

/// Calls visit(outcome, weight) for every outcome of positive probability,
/// type assignments in ascending order and, inside each, selection sets in
/// ascending bitmask order with the last node varying fastest. Weights sum
/// to one over the visited set.
template <typename Visitor>
void for_each_outcome(const ModelParams& params, const TypeCondition& cond, Visitor&& visit,
                      const EnumerationBudget& budget) {
  const ModelParams p = validate_params(params);
  if (p.n > budget.max_n || p.n > kOracleMaxNodes)
    throw BudgetError("enumeration: n = " + std::to_string(p.n) + " exceeds budget max_n = " +
                      std::to_string(std::min(budget.max_n, kOracleMaxNodes)));
  const std::uint64_t total = outcome_count(p, cond);
  if (total > budget.max_outcomes)
    throw BudgetError("enumeration: " + std::to_string(total) + " outcomes exceed budget of " +
                      std::to_string(budget.max_outcomes));

  std::uint32_t fixed_mask = 0, fixed_type1 = 0;
  for (const auto& [node, t] : cond.fixed) {
    if (node >= p.n) throw std::invalid_argument("type condition on node outside the graph");
    const std::uint32_t bit = 1U << node;
    const std::uint32_t want = t == NodeType::Type1 ? bit : 0U;
    if ((fixed_mask & bit) && (fixed_type1 & bit) != want)
      throw std::domain_error("conditioning event has zero probability (contradictory types)");
    fixed_mask |= bit;
    fixed_type1 |= want;
  }
  if ((fixed_type1 && p.mu == 0.0) || ((fixed_mask & ~fixed_type1) && p.mu == 1.0))
    throw std::domain_error("conditioning event has zero probability");

  std::vector<std::vector<std::uint32_t>> cands[2];
  for (NodeId i = 0; i < p.n; ++i) {
    cands[0].push_back(detail::selection_masks(p.n, i, p.k1));
    cands[1].push_back(detail::selection_masks(p.n, i, p.k2));
  }
  const double per_pick1 = 1.0 / static_cast<double>(cands[0][0].size());
  const double per_pick2 = 1.0 / static_cast<double>(cands[1][0].size());

  Outcome o;
  o.n_ = p.n;
  std::vector<std::uint32_t> idx(p.n);
  std::vector<const std::vector<std::uint32_t>*> list(p.n);
  for (std::uint32_t types = 0; types < (1U << p.n); ++types) {
    if ((types & fixed_mask) != fixed_type1) continue;
    double weight = 1.0;
    for (NodeId v = 0; v < p.n; ++v) {
      const bool t1 = (types >> v) & 1U;
      if (!((fixed_mask >> v) & 1U)) weight *= t1 ? p.mu : 1.0 - p.mu;
      weight *= t1 ? per_pick1 : per_pick2;
    }
    if (weight == 0.0) continue;

    o.type1_ = types;
    for (NodeId v = 0; v < p.n; ++v) {
      list[v] = &cands[((types >> v) & 1U) ? 0 : 1][v];
      idx[v] = 0;
      o.selected_[v] = (*list[v])[0];
    }
    while (true) {
      o.rebuild_adjacency();
      visit(static_cast<const Outcome&>(o), weight);
      std::int64_t v = static_cast<std::int64_t>(p.n) - 1;
      for (; v >= 0; --v) {
        if (++idx[v] < list[v]->size()) {
          o.selected_[v] = (*list[v])[idx[v]];
          break;
        }
        idx[v] = 0;
        o.selected_[v] = (*list[v])[0];
      }
      if (v < 0) break;
    }
  }
}

/// P[event | cond], exact.
template <typename Event>
double enumerate_event_prob(const ModelParams& p, Event&& event, const TypeCondition& cond = {},
                            const EnumerationBudget& budget = {}) {
  CompensatedSum hit;
  for_each_outcome(
      p, cond,
      [&](const Outcome& o, double w) {
        if (event(o)) hit.add(w);
      },
      budget);
  return hit.value();
}

/// P[minimum degree >= k].
inline double enumerate_min_degree_prob(const ModelParams& p, std::uint32_t k, const EnumerationBudget& budget = {}) {
  return enumerate_event_prob(p, [k](const Outcome& o) { return o.min_degree() >= k; }, {}, budget);
}

/// P[k-vertex-connected], by vertex-subset removal on every outcome.
inline double enumerate_kconn_prob(const ModelParams& p, std::uint32_t k, const EnumerationBudget& budget = {}) {
  return enumerate_event_prob(p, [k](const Outcome& o) { return o.k_connected(k); }, {}, budget);
}

/// P[deg(0) = deg(1) = k-1 | nodes 0 and 1 are type-1].
inline double enumerate_joint_degree_prob(const ModelParams& p, std::uint32_t k, const EnumerationBudget& budget = {}) {
  const TypeCondition both{{{0, NodeType::Type1}, {1, NodeType::Type1}}};
  return enumerate_event_prob(
      p, [k](const Outcome& o) { return o.degree(0) + 1 == k && o.degree(1) + 1 == k; }, both, budget);
}

/// Entry d is P[deg(0) = d | node 0 has type t], d = 0..n-1.
inline std::vector<double> enumerate_degree_pmf(const ModelParams& p, NodeType t, const EnumerationBudget& budget = {}) {
  std::vector<CompensatedSum> acc(p.n);
  for_each_outcome(p, TypeCondition{{{0, t}}}, [&](const Outcome& o, double w) { acc[o.degree(0)].add(w); }, budget);
  std::vector<double> out;
  for (const auto& a : acc) out.push_back(a.value());
  return out;
}

/// Entry d is E[number of nodes with degree d], d = 0..n-1.
inline std::vector<double> enumerate_expected_count_Z(const ModelParams& p, const EnumerationBudget& budget = {}) {
  std::vector<CompensatedSum> acc(p.n);
  for_each_outcome(
      p, {},
      [&](const Outcome& o, double w) {
        for (NodeId v = 0; v < o.node_count(); ++v) acc[o.degree(v)].add(w);
      },
      budget);
  std::vector<double> out;
  for (const auto& a : acc) out.push_back(a.value());
  return out;
}

/// How node 2 treats nodes 0 and 1: picks both, exactly node 0, neither.
inline PairPickProbs enumerate_pair_pick_probs(const ModelParams& p, const EnumerationBudget& budget = {}) {
  if (p.n < 3) throw std::invalid_argument("pair pick probabilities need n >= 3");
  CompensatedSum both, only0, neither;
  for_each_outcome(
      p, {},
      [&](const Outcome& o, double w) {
        const bool a = o.picks(2, 0), b = o.picks(2, 1);
        if (a && b) both.add(w);
        if (a && !b) only0.add(w);
        if (!a && !b) neither.add(w);
      },
      budget);
  return {both.value(), only0.value(), neither.value()};
}

/// table[alpha][beta] = P[among nodes 2..pool+1, exactly alpha pick node 0
/// and exactly beta pick node 1]. Requires pool <= n-2.
inline std::vector<std::vector<double>> enumerate_pick_counts(const ModelParams& p, std::uint32_t pool,
                                                              const EnumerationBudget& budget = {}) {
  if (pool + 2 > p.n) throw std::invalid_argument("pick-count pool must leave nodes 0 and 1 outside");
  std::vector<std::vector<CompensatedSum>> acc(pool + 1, std::vector<CompensatedSum>(pool + 1));
  for_each_outcome(
      p, {},
      [&](const Outcome& o, double w) {
        std::uint32_t a = 0, b = 0;
        for (NodeId v = 2; v < pool + 2; ++v) {
          a += o.picks(v, 0);
          b += o.picks(v, 1);
        }
        acc[a][b].add(w);
      },
      budget);
  std::vector<std::vector<double>> out(pool + 1, std::vector<double>(pool + 1));
  for (std::uint32_t a = 0; a <= pool; ++a)
    for (std::uint32_t b = 0; b <= pool; ++b) out[a][b] = acc[a][b].value();
  return out;
}

}  // namespace hkout
