#include <catch_amalgamated.hpp>

#include <cmath>

#include "hkout/analytics.hpp"
#include "hkout/oracle.hpp"
#include "trend_checks.hpp"

using namespace hkout;
using Catch::Approx;

TEST_CASE("mean selection", "[analytics]") {
  CHECK(mean_selection(0.5, 3) == 2.0);
  CHECK(mean_selection(0.0, 4) == 4.0);
  CHECK(mean_selection(1.0, 99) == 1.0);
  CHECK_THROWS_AS(mean_selection(1.5, 3), ParamError);
  CHECK_THROWS_AS(mean_selection(0.5, 0), ParamError);
}

TEST_CASE("edge probability and mean degree", "[analytics]") {
  CHECK(edge_probability(3, 1.0) == 0.75);
  CHECK(edge_probability(17, 16.0) == 1.0);
  CHECK(edge_probability(500, 13.0) == Approx(2 * 13.0 / 499 - (13.0 / 499) * (13.0 / 499)).epsilon(1e-15));
  CHECK(edge_probability(500, 13.0) == Approx(0.0514255).margin(5e-8));
  CHECK(mean_degree(5, 2.0) == Approx(3.0).epsilon(1e-15));
  CHECK(mean_degree(500, 13.0) == Approx(25.6613).margin(5e-5));
  CHECK_THROWS(edge_probability(1, 0.5));
  CHECK_THROWS(edge_probability(5, 0.0));
  CHECK_THROWS(edge_probability(5, 4.5));
}

TEST_CASE("mean degree approaches twice the mean selection when it is o(n)", "[analytics][trend]") {
  double prev = 1.0;
  for (std::int64_t n : {100, 1000, 10000, 100000, 1000000}) {
    const double mk = std::log(static_cast<double>(n));
    const double gap = 1.0 - mean_degree(n, mk) / (2 * mk);
    CHECK(gap > 0.0);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("degree pmf", "[analytics]") {
  CHECK(degree_pmf(4, 0.5, 2, NodeType::Type1, 1) == Approx(0.25).epsilon(1e-15));
  CHECK(degree_pmf(4, 0.5, 2, NodeType::Type1, 2) == Approx(0.5).epsilon(1e-15));
  CHECK(degree_pmf(4, 0.5, 2, NodeType::Type1, 3) == Approx(0.25).epsilon(1e-15));
  CHECK(degree_pmf(4, 0.5, 2, NodeType::Type1, 0) == 0.0);
  for (std::int64_t k2 : {2, 3, 7})
    for (double mu : {0.0, 0.3, 1.0}) CHECK(degree_pmf(20, mu, k2, NodeType::Type2, k2 - 1) == 0.0);
  CHECK(degree_pmf(4, 0.5, 2, NodeType::Type1, 4) == 0.0);
  CHECK_THROWS(degree_pmf(4, 0.5, 2, NodeType::Type1, -1));
  CHECK_THROWS(degree_pmf(4, 0.5, 4, NodeType::Type1, 1));
}

TEST_CASE("degree pmf sums to one", "[analytics]") {
  for (std::int64_t n : {3, 10, 500, 2000, 100000})
    for (double mu : {0.0, 0.1, 0.5, 0.9, 1.0})
      for (std::int64_t k2 : {1, 2, 5, 40}) {
        if (k2 > n - 1) continue;
        for (NodeType t : {NodeType::Type1, NodeType::Type2}) {
          CompensatedSum s;
          for (std::int64_t d = 0; d < n; ++d) s.add(degree_pmf(n, mu, k2, t, d));
          CHECK(s.value() == Approx(1.0).margin(n <= 5000 ? 1e-13 : 1e-11));
        }
      }
}

TEST_CASE("binomial term matches an independent recurrence", "[analytics]") {
  for (std::int64_t N : {10, 1000, 100000}) {
    const double p = std::min(0.3, 13.0 / static_cast<double>(N));
    double term = std::pow(1 - p, static_cast<double>(N));
    for (std::int64_t j = 0; j <= std::min<std::int64_t>(40, N); ++j) {
      CHECK(detail::binomial_term(N, j, p) == Approx(term).epsilon(1e-10));
      term *= static_cast<double>(N - j) / static_cast<double>(j + 1) * p / (1 - p);
    }
  }
}

TEST_CASE("expected count of degree-d nodes", "[analytics]") {
  CHECK(expected_count_Z(4, 0.5, 2, 1) == Approx(0.5).epsilon(1e-15));
  for (std::int64_t n : {3, 50, 500})
    for (double mu : {0.1, 0.5, 1.0}) {
      CHECK(expected_count_Z(n, mu, 2, 0) == 0.0);
      double s = 0;
      for (std::int64_t d = 0; d < n; ++d) s += expected_count_Z(n, mu, 2, d);
      CHECK(s == Approx(static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("scaling offset gamma", "[analytics]") {
  CHECK(gamma_from_scaling(500, 0.5, 25, 2).gamma == Approx(6.78539).margin(5e-6));
  CHECK(gamma_from_scaling(500, 0.5, 25, 3).gamma == Approx(4.95845).margin(5e-6));
  const auto pt = gamma_from_scaling(500, 0.5, 25, 3);
  CHECK(pt.mean_k == 13.0);
  CHECK(pt.n == 500);
  CHECK(pt.k == 3);

  // gamma vanishes exactly when <K> = log n + (k-2) log log n; solve for mu at K2 = 20.
  const double ln = std::log(1000.0);
  const double target = ln + std::log(ln);
  const double mu = 1.0 - (target - 1.0) / (20.0 - 1.0);
  CHECK(gamma_from_scaling(1000, mu, 20, 3).gamma == Approx(0.0).margin(1e-12));

  CHECK_THROWS_AS(gamma_from_scaling(2, 0.5, 1, 2), ParamError);
  CHECK_THROWS_AS(gamma_from_scaling(10, 0.5, 2, 1), ParamError);
}

TEST_CASE("threshold K2", "[analytics]") {
  CHECK(threshold_k2(500, 0.5, 2) == 13);
  CHECK(threshold_k2(500, 0.5, 3) == 17);
  CHECK(threshold_k2(500, 0.1, 4) == 11);
  CHECK(threshold_k2(500, 0.5, 4) == 20);
  CHECK(threshold_k2(500, 0.1, 2) == 7);
  CHECK(threshold_k2(500, 0.9, 2) == 63);
  CHECK(threshold_k2(500, 0.9, 4) == 99);
  CHECK_THROWS_AS(threshold_k2(500, 1.0, 2), ParamError);
  CHECK_THROWS_AS(threshold_k2(2, 0.5, 2), ParamError);
  CHECK_THROWS_AS(threshold_k2(500, 0.5, 1), ParamError);
}

TEST_CASE("pair pick probabilities", "[analytics]") {
  const auto p = pair_pick_probs(5, 0.5, 2);
  CHECK(p.p12 == Approx(1.0 / 12).epsilon(1e-15));
  CHECK(p.p1not2 == Approx(0.291667).margin(5e-7));
  CHECK(p.pnot1not2 == Approx(0.333333).margin(5e-7));
  CHECK(p.p12 + 2 * p.p1not2 + p.pnot1not2 == Approx(1.0).margin(1e-15));
  CHECK(pair_pick_probs(10, 1.0, 4).p12 == 0.0);
  CHECK_THROWS(pair_pick_probs(2, 0.5, 1));
}

TEST_CASE("quantity A and B", "[analytics]") {
  const auto probs = pair_pick_probs(6, 0.4, 3);
  CHECK(quantity_A(1, 1, 0, 0, probs) == Approx(probs.p1not2).epsilon(1e-15));
  CHECK(quantity_A(4, 0, 0, 0, probs) == Approx(std::pow(probs.pnot1not2, 4)).epsilon(1e-14));
  CHECK(quantity_A(2, 1, 1, 1, probs) == Approx(2 * probs.p12 * probs.pnot1not2).epsilon(1e-14));
  CHECK(quantity_A(2, 2, 0, 1, probs) == 0.0);  // needs 3 outsiders
  CHECK(quantity_A(2, 1, 2, 1, probs) == 0.0);  // r above alpha
  CHECK(quantity_A(-1, 0, 0, 0, probs) == 0.0);

  CHECK(quantity_B(5, 0, 0, probs) == Approx(std::pow(probs.pnot1not2, 5)).epsilon(1e-14));
  CHECK(quantity_B(5, -1, 2, probs) == 0.0);
  CHECK(quantity_B(5, 2, -1, probs) == 0.0);

  // B over all (alpha, beta) is a distribution over the m outsiders.
  for (std::int64_t m : {0, 1, 3, 7, 40}) {
    double s = 0;
    for (std::int64_t a = 0; a <= m; ++a)
      for (std::int64_t b = 0; b <= m; ++b) s += quantity_B(m, a, b, probs);
    CHECK(s == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("quantity A log-space branch matches the direct branch", "[analytics]") {
  const auto probs = pair_pick_probs(400, 0.5, 12);
  // picked = 31 forces the log path; compare against an explicit product.
  const std::int64_t m = 200, a = 20, r = 5, b = 16;
  const std::int64_t only1 = a - r, only2 = b - r, none = m - a - b + r;
  const double direct = std::exp(std::lgamma(m + 1.0) - std::lgamma(only1 + 1.0) - std::lgamma(r + 1.0) -
                                 std::lgamma(only2 + 1.0) - std::lgamma(none + 1.0)) *
                        std::pow(probs.p1not2, only1 + only2) * std::pow(probs.p12, r) *
                        std::pow(probs.pnot1not2, none);
  CHECK(quantity_A(m, a, r, b, probs) == Approx(direct).epsilon(1e-9));
}

TEST_CASE("joint degree anchor and second moment ratio", "[analytics]") {
  CHECK(joint_degree_prob_type1(3, 1.0, 1, 2) == Approx(0.25).epsilon(1e-15));
  CHECK(joint_degree_prob_type1(3, 1.0, 2, 2) == Approx(0.25).epsilon(1e-15));
  // P[deg(v1) = 1 | type-1] is 1/2 at n = 3 (only the third node's pick matters), so the ratio is 1.
  CHECK(degree_pmf(3, 1.0, 2, NodeType::Type1, 1) == Approx(0.5).epsilon(1e-15));
  CHECK(second_moment_ratio(3, 1.0, 2, 2) == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(second_moment_ratio(5, 0.5, 2, 6), std::domain_error);
  CHECK_THROWS_AS(joint_degree_prob_type1(5, 0.5, 2, 1), ParamError);
}

TEST_CASE("psi", "[analytics]") {
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(0.5) == Approx(0.193147).margin(5e-7));
  CHECK(psi(1e-3) / 1e-6 == Approx(0.5).epsilon(1e-3));
  for (double x : {1e-9, 0.01, 0.3, 0.99}) CHECK(psi(x) >= 0.0);
  CHECK_THROWS(psi(1.0));
  CHECK_THROWS(psi(-0.1));
}

TEST_CASE("normalizations over a parameter grid", "[analytics]") {
  int points = 0;
  for (std::int64_t n : {4, 10, 57, 500, 5000})
    for (double mu : {0.0, 0.05, 0.5, 0.95, 1.0})
      for (std::int64_t k2 : {1, 2, 3, 25}) {
        if (k2 > n - 1) continue;
        ++points;
        const auto p = pair_pick_probs(n, mu, k2);
        CHECK(p.p12 + 2 * p.p1not2 + p.pnot1not2 == Approx(1.0).margin(1e-12));
        for (double v : {p.p12, p.p1not2, p.pnot1not2}) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
  CHECK(points > 50);
}

TEST_CASE("trend: expected count near the threshold stays in a band", "[analytics][trend]") {
  const auto r = trends::expected_count_band();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("trend: A decreasing in the both-pick count", "[analytics][trend]") {
  const auto r = trends::quantity_a_decreasing_in_r();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("trend: A approaches its Poisson form", "[analytics][trend]") {
  const auto r = trends::quantity_a_poisson_limit();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("trend: expected low-degree count vanishes above the threshold", "[analytics][trend]") {
  const auto r = trends::expected_count_vanishes();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("trend: expected low-degree type-1 count grows below the threshold", "[analytics][trend]") {
  const auto r = trends::low_degree_type1_grows();
  INFO(r.detail);
  CHECK(r.pass);
}

TEST_CASE("trend: second moment ratio falls toward one", "[analytics][trend]") {
  const auto r = trends::second_moment_ratio_trend();
  INFO(r.detail);
  CHECK(r.pass);
}
