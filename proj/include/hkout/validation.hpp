#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hkout/analytics.hpp"
#include "hkout/oracle.hpp"
#include "hkout/params.hpp"

namespace hkout {

/// One closed-form value next to its enumerated counterpart.
struct FormulaCheck {
  std::string quantity;  // e.g. "degree_pmf"
  std::string argument;  // e.g. "type-1 d=2"
  std::uint32_t n = 0;
  double mu = 0;
  std::uint32_t k2 = 0;
  double formula = 0;
  double oracle = 0;

  double abs_error() const { return std::abs(formula - oracle); }
};

struct ValidationGrid {
  std::vector<std::uint32_t> n_values{4, 5, 6};
  std::vector<double> mu_values{0.25, 0.5, 0.75};
  std::vector<std::uint32_t> k2_values{2, 3};
  std::vector<std::uint32_t> joint_k_values{2, 3};
  std::uint32_t max_pool = 4;
};

/// Grid with n = 3 .. max_n and the default mu, K2 and k lists.
inline ValidationGrid validation_grid_up_to(std::uint32_t max_n) {
  ValidationGrid g;
  g.n_values.clear();
  for (std::uint32_t n = 3; n <= max_n; ++n) g.n_values.push_back(n);
  return g;
}

/// Every formula/oracle pair on the grid. (n, K2) combinations with
/// K2 > n-1 are skipped.
inline std::vector<FormulaCheck> run_formula_checks(const ValidationGrid& grid,
                                                    const EnumerationBudget& budget = {}) {
  std::vector<FormulaCheck> out;
  for (auto n : grid.n_values) {
    for (double mu : grid.mu_values) {
      for (auto k2 : grid.k2_values) {
        if (k2 + 1 > n) continue;
        ModelParams p;
        p.n = n;
        p.mu = mu;
        p.k2 = k2;
        p = validate_params(p);
        auto add = [&](std::string q, std::string arg, double f, double o) {
          out.push_back({std::move(q), std::move(arg), n, mu, k2, f, o});
        };

        for (NodeType t : {NodeType::Type1, NodeType::Type2}) {
          const auto pmf = enumerate_degree_pmf(p, t, budget);
          for (std::uint32_t d = 0; d < n; ++d)
            add("degree_pmf", std::string(to_string(t)) + " d=" + std::to_string(d), degree_pmf(n, mu, k2, t, d),
                pmf[d]);
        }

        const auto z = enumerate_expected_count_Z(p, budget);
        for (std::uint32_t d = 0; d < n; ++d)
          add("expected_count_Z", "d=" + std::to_string(d), expected_count_Z(n, mu, k2, d), z[d]);

        const PairPickProbs exact = pair_pick_probs(n, mu, k2);
        const PairPickProbs seen = enumerate_pair_pick_probs(p, budget);
        add("pair_pick_probs", "p12", exact.p12, seen.p12);
        add("pair_pick_probs", "p1not2", exact.p1not2, seen.p1not2);
        add("pair_pick_probs", "pnot1not2", exact.pnot1not2, seen.pnot1not2);

        for (std::uint32_t pool = 1; pool <= std::min(grid.max_pool, n - 2); ++pool) {
          const auto table = enumerate_pick_counts(p, pool, budget);
          for (std::uint32_t a = 0; a <= pool; ++a)
            for (std::uint32_t b = 0; b <= pool; ++b)
              add("quantity_B",
                  "m=" + std::to_string(pool) + " a=" + std::to_string(a) + " b=" + std::to_string(b),
                  quantity_B(pool, a, b, exact), table[a][b]);
        }

        for (auto k : grid.joint_k_values)
          add("joint_degree_prob_type1", "k=" + std::to_string(k), joint_degree_prob_type1(n, mu, k2, k),
              enumerate_joint_degree_prob(p, k, budget));
      }
    }
  }
  return out;
}

inline double max_abs_error(const std::vector<FormulaCheck>& checks) {
  double worst = 0;
  for (const auto& c : checks) worst = std::max(worst, c.abs_error());
  return worst;
}

}  // namespace hkout
