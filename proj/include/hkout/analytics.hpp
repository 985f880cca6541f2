#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/binomial.hpp>

#include "hkout/params.hpp"

// Closed-form, finite-n quantities for the inhomogeneous random K-out graph
// with one selection per type-1 node. All logarithms are natural.

namespace hkout {

/// Location of (n, mu, k2) relative to the critical scaling for target k:
/// mean_k = log n + (k-2) log log n + gamma.
struct ScalingPoint {
  std::uint32_t n = 0;
  double mu = 0;
  std::uint32_t k2 = 0;
  std::uint32_t k = 0;
  double mean_k = 0;
  double gamma = 0;
};

/// Probabilities that one node outside {v1, v2} picks both of them, exactly
/// v1 (equivalently exactly v2), or neither.
struct PairPickProbs {
  double p12 = 0;
  double p1not2 = 0;
  double pnot1not2 = 0;
};

namespace detail {

inline void check_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) param_violation("0 <= mu <= 1", "mu", mu);
}

inline void check_model(std::int64_t n, double mu, std::int64_t k2) {
  if (n < 2) param_violation("n >= 2", "n", n);
  check_mu(mu);
  if (k2 < 1) param_violation("k2 >= 1", "k2", k2);
  if (k2 > n - 1) param_violation("k2 <= n-1", "k2", k2);
}

/// base^e with 0^0 = 1.
inline double power(double base, std::int64_t e) {
  if (e == 0) return 1.0;
  if (base == 0.0) return 0.0;
  return std::pow(base, static_cast<double>(e));
}

/// C(N, j) p^j (1-p)^(N-j); zero outside 0 <= j <= N.
inline double binomial_term(std::int64_t N, std::int64_t j, double p) {
  if (j < 0 || N < 0 || j > N) return 0.0;
  if (p <= 0.0) return j == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return j == N ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::binomial_distribution<double>(static_cast<double>(N), p),
                          static_cast<double>(j));
}

}  // namespace detail

/// Mean number of selections per node, mu * 1 + (1 - mu) * k2.
inline double mean_selection(double mu, std::int64_t k2) {
  detail::check_mu(mu);
  if (k2 < 1) detail::param_violation("k2 >= 1", "k2", k2);
  return mu + (1.0 - mu) * static_cast<double>(k2);
}

/// P[i ~ j] = 2p - p^2 with p = mean_k / (n - 1).
inline double edge_probability(std::int64_t n, double mean_k) {
  if (n < 2) detail::param_violation("n >= 2", "n", n);
  if (!(mean_k > 0.0 && mean_k <= static_cast<double>(n - 1)))
    detail::param_violation("0 < mean_k <= n-1", "mean_k", mean_k);
  const double p = mean_k / static_cast<double>(n - 1);
  return 2.0 * p - p * p;
}

/// Expected degree of any node, 2 mean_k - mean_k^2 / (n - 1).
inline double mean_degree(std::int64_t n, double mean_k) {
  return static_cast<double>(n - 1) * edge_probability(n, mean_k);
}

/// P[deg(v) = d | type of v]. A node of type t holds its own K_t selections
/// and each of the other n-1-K_t nodes picks it independently with
/// probability mean_k / (n - 1).
inline double degree_pmf(std::int64_t n, double mu, std::int64_t k2, NodeType type, std::int64_t d) {
  detail::check_model(n, mu, k2);
  if (d < 0) detail::param_violation("d >= 0", "d", d);
  const double p = mean_selection(mu, k2) / static_cast<double>(n - 1);
  const std::int64_t own = type == NodeType::Type1 ? 1 : k2;
  return detail::binomial_term(n - 1 - own, d - own, p);
}

/// E[Z_{n,d}], the expected number of nodes with degree exactly d.
inline double expected_count_Z(std::int64_t n, double mu, std::int64_t k2, std::int64_t d) {
  const double t1 = mu > 0.0 ? degree_pmf(n, mu, k2, NodeType::Type1, d) : 0.0;
  const double t2 = mu < 1.0 ? degree_pmf(n, mu, k2, NodeType::Type2, d) : 0.0;
  return static_cast<double>(n) * (mu * t1 + (1.0 - mu) * t2);
}

inline ScalingPoint gamma_from_scaling(std::int64_t n, double mu, std::int64_t k2, std::int64_t k) {
  if (n < 3) detail::param_violation("n >= 3 (log log n must be positive)", "n", n);
  if (k < 2) detail::param_violation("k >= 2", "k", k);
  ScalingPoint pt;
  pt.n = static_cast<std::uint32_t>(n);
  pt.mu = mu;
  pt.k2 = static_cast<std::uint32_t>(k2);
  pt.k = static_cast<std::uint32_t>(k);
  pt.mean_k = mean_selection(mu, k2);
  const double ln = std::log(static_cast<double>(n));
  pt.gamma = pt.mean_k - ln - static_cast<double>(k - 2) * std::log(ln);
  return pt;
}

/// Smallest K2 with (1 - mu) K2 >= log n + (k-2) log log n.
inline std::uint32_t threshold_k2(std::int64_t n, double mu, std::int64_t k) {
  if (n < 3) detail::param_violation("n >= 3 (log log n must be positive)", "n", n);
  if (k < 2) detail::param_violation("k >= 2", "k", k);
  if (!(mu >= 0.0 && mu < 1.0)) detail::param_violation("0 <= mu < 1", "mu", mu);
  const double ln = std::log(static_cast<double>(n));
  return static_cast<std::uint32_t>(std::ceil((ln + static_cast<double>(k - 2) * std::log(ln)) / (1.0 - mu)));
}

/// Exact finite-n pick probabilities for a node outside {v1, v2}.
/// Formulas use n-2 in a denominator, so n >= 3.
inline PairPickProbs pair_pick_probs(std::int64_t n, double mu, std::int64_t k2) {
  detail::check_model(n, mu, k2);
  if (n < 3) detail::param_violation("n >= 3", "n", n);
  const double N1 = static_cast<double>(n - 1);
  const double N2 = static_cast<double>(n - 2);
  const double K = static_cast<double>(k2);
  const double rest = static_cast<double>(n - k2 - 1);
  PairPickProbs p;
  p.p12 = (1.0 - mu) * K * (K - 1.0) / (N1 * N2);
  p.p1not2 = mu / N1 + (1.0 - mu) * rest * K / (N1 * N2);
  p.pnot1not2 = mu * static_cast<double>(n - 3) / N1 + (1.0 - mu) * rest * (rest - 1.0) / (N1 * N2);
  return p;
}

/// Probability that, among m independent outside nodes, alpha - r pick v1
/// only, beta - r pick v2 only, r pick both and the rest pick neither.
/// Zero when any of those counts is negative.
inline double quantity_A(std::int64_t m, std::int64_t alpha, std::int64_t r, std::int64_t beta,
                         const PairPickProbs& probs) {
  const std::int64_t only1 = alpha - r, only2 = beta - r, neither = m - alpha - beta + r;
  if (m < 0 || r < 0 || only1 < 0 || only2 < 0 || neither < 0) return 0.0;

  // m! / (only1! r! only2! neither!) as a falling factorial over small factorials.
  const std::int64_t picked = only1 + only2 + r;
  if (picked <= 30) {
    double coef = 1.0;
    for (std::int64_t i = 0; i < picked; ++i) coef *= static_cast<double>(m - i);
    for (std::int64_t i = 2; i <= only1; ++i) coef /= static_cast<double>(i);
    for (std::int64_t i = 2; i <= r; ++i) coef /= static_cast<double>(i);
    for (std::int64_t i = 2; i <= only2; ++i) coef /= static_cast<double>(i);
    return coef * detail::power(probs.p1not2, only1 + only2) * detail::power(probs.p12, r) *
           detail::power(probs.pnot1not2, neither);
  }
  double log_coef = 0.0;
  for (std::int64_t i = 0; i < picked; ++i) log_coef += std::log(static_cast<double>(m - i));
  log_coef -= std::lgamma(static_cast<double>(only1) + 1) + std::lgamma(static_cast<double>(r) + 1) +
              std::lgamma(static_cast<double>(only2) + 1);
  const double w1 = detail::power(probs.p1not2, only1 + only2);
  const double w12 = detail::power(probs.p12, r);
  const double w0 = detail::power(probs.pnot1not2, neither);
  if (w1 == 0.0 || w12 == 0.0 || w0 == 0.0) return 0.0;
  return std::exp(log_coef + std::log(w1) + std::log(w12) + std::log(w0));
}

/// Probability that, among m outside nodes, exactly alpha pick v1 and exactly
/// beta pick v2. Zero for negative alpha or beta.
inline double quantity_B(std::int64_t m, std::int64_t alpha, std::int64_t beta, const PairPickProbs& probs) {
  if (alpha < 0 || beta < 0) return 0.0;
  double sum = 0.0;
  for (std::int64_t r = 0; r <= std::min(alpha, beta); ++r) sum += quantity_A(m, alpha, r, beta, probs);
  return sum;
}

/// P[deg(v1) = deg(v2) = k-1 | both type-1], summed over how v1 and v2
/// spend their single selections:
///   mutual pick                          -> n-2 outsiders supply the rest;
///   one-way pick, v2's peer w picks v1 or not;
///   same peer w                          -> n-3 outsiders;
///   distinct peers w1, w2, each may pick the other end's node.
/// A one-way pick v1 -> v2 sends v2's selection to some w, whose own pick of
/// v1 (probability mean_k / (n-1)) decides whether v1 still needs k-3 or k-2
/// more edges; both branches carry that weight.
inline double joint_degree_prob_type1(std::int64_t n, double mu, std::int64_t k2, std::int64_t k) {
  if (k < 2) detail::param_violation("k >= 2", "k", k);
  const PairPickProbs probs = pair_pick_probs(n, mu, k2);
  const double q = 1.0 / static_cast<double>(n - 1);         // v1 picks v2
  const double s = 1.0 / static_cast<double>(n - 2);         // same peer
  const double p = mean_selection(mu, k2) / static_cast<double>(n - 1);  // peer picks back
  auto B = [&](std::int64_t pool, std::int64_t a, std::int64_t b) {
    return quantity_B(pool, a, b, probs);
  };

  const double mutual = q * q * B(n - 2, k - 2, k - 2);
  const double one_way =
      2.0 * q * (1.0 - q) * (p * B(n - 3, k - 3, k - 3) + (1.0 - p) * B(n - 3, k - 2, k - 3));
  const double apart = (1.0 - q) * (1.0 - q);
  const double shared_peer = apart * s * B(n - 3, k - 2, k - 2);
  const double distinct_peers =
      apart * (1.0 - s) *
      (p * p * B(n - 4, k - 3, k - 3) + 2.0 * p * (1.0 - p) * B(n - 4, k - 2, k - 3) +
       (1.0 - p) * (1.0 - p) * B(n - 4, k - 2, k - 2));
  return mutual + one_way + shared_peer + distinct_peers;
}

/// P[deg(v1)=deg(v2)=k-1 | t1=t2=1] / P[deg(v1)=k-1 | t1=1]^2.
inline double second_moment_ratio(std::int64_t n, double mu, std::int64_t k2, std::int64_t k) {
  const double single = degree_pmf(n, mu, k2, NodeType::Type1, k - 1);
  if (single == 0.0) throw std::domain_error("second_moment_ratio: P[deg(v1) = k-1 | type-1] is zero");
  return joint_degree_prob_type1(n, mu, k2, k) / (single * single);
}

/// Psi(x) = -x - log(1 - x), the integral of t / (1 - t) over [0, x].
inline double psi(double x) {
  if (!(x >= 0.0 && x < 1.0)) detail::param_violation("0 <= x < 1", "x", x);
  return -x - std::log1p(-x);
}

}  // namespace hkout
