#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hkout {

using NodeId = std::uint32_t;

enum class NodeType : std::uint8_t { Type1, Type2 };

inline const char* to_string(NodeType t) noexcept {
  return t == NodeType::Type1 ? "type-1" : "type-2";
}

/// Thrown when model or analysis parameters violate their bounds.
class ParamError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters of the heterogeneous pairwise scheme.
///
/// Each of the n nodes is type-1 with probability mu and then selects k1
/// distinct peers uniformly at random; otherwise it is type-2 and selects k2.
struct ModelParams {
  std::uint32_t n = 2;
  double mu = 0.5;
  std::uint32_t k1 = 1;
  std::uint32_t k2 = 2;
  /// Set by validate_params: 0 < mu < 1, k1 == 1 and 2 <= k2 < n.
  bool in_regime = false;

  std::uint32_t selections(NodeType t) const noexcept {
    return t == NodeType::Type1 ? k1 : k2;
  }

  friend bool operator==(const ModelParams& a, const ModelParams& b) noexcept {
    return a.n == b.n && a.mu == b.mu && a.k1 == b.k1 && a.k2 == b.k2;
  }
};

namespace detail {

template <typename T>
[[noreturn]] void param_violation(const char* bound, const char* name, T value) {
  std::ostringstream os;
  os << bound << " violated (" << name << " = " << value << ")";
  throw ParamError(os.str());
}

}  // namespace detail

/// Checks every bound on p and returns a copy with in_regime filled in.
/// Throws ParamError naming the first violated bound.
inline ModelParams validate_params(ModelParams p) {
  if (p.n < 2) detail::param_violation("n >= 2", "n", p.n);
  if (!(p.mu >= 0.0 && p.mu <= 1.0)) detail::param_violation("0 <= mu <= 1", "mu", p.mu);
  if (p.k1 < 1) detail::param_violation("k1 >= 1", "k1", p.k1);
  if (p.k1 > p.n - 1) detail::param_violation("k1 <= n-1", "k1", p.k1);
  if (p.k2 < 1) detail::param_violation("k2 >= 1", "k2", p.k2);
  if (p.k2 > p.n - 1) detail::param_violation("k2 <= n-1", "k2", p.k2);
  if (p.k1 > p.k2) detail::param_violation("k1 <= k2", "k1", p.k1);
  p.in_regime = p.mu > 0.0 && p.mu < 1.0 && p.k1 == 1 && p.k2 >= 2 && p.k2 < p.n;
  return p;
}

/// Formulas that assume one selection per type-1 node call this.
inline void require_single_type1_selection(const ModelParams& p) {
  if (p.k1 != 1) detail::param_violation("k1 == 1 (closed forms assume it)", "k1", p.k1);
}

}  // namespace hkout
