#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hkout/graph.hpp"
#include "hkout/params.hpp"
#include "hkout/rng.hpp"

namespace hkout {

/// Node types and the peers each node picked during initialization.
/// selections[i] is sorted ascending.
struct SelectionTable {
  std::vector<NodeType> types;
  std::vector<std::vector<NodeId>> selections;

  std::uint32_t node_count() const noexcept {
    return static_cast<std::uint32_t>(types.size());
  }

  bool picks(NodeId i, NodeId j) const noexcept {
    const auto& s = selections[i];
    return std::binary_search(s.begin(), s.end(), j);
  }

  /// True when sizes match the types under p, and there are no
  /// self-selections, duplicates or out-of-range ids.
  bool consistent_with(const ModelParams& p) const {
    if (types.size() != p.n || selections.size() != p.n) return false;
    for (NodeId i = 0; i < p.n; ++i) {
      const auto& s = selections[i];
      if (s.size() != p.selections(types[i])) return false;
      if (!std::is_sorted(s.begin(), s.end())) return false;
      if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
      for (NodeId j : s)
        if (j == i || j >= p.n) return false;
    }
    return true;
  }

  friend bool operator==(const SelectionTable&, const SelectionTable&) = default;
};

using KeyId = std::uint32_t;

/// Pairwise key rings. Key ids are dense, assigned in sorted pair order.
struct KeyRingTable {
  std::vector<std::vector<KeyId>> rings;
  std::vector<Edge> pair_of_key;

  std::size_t key_count() const noexcept { return pair_of_key.size(); }

  friend bool operator==(const KeyRingTable&, const KeyRingTable&) = default;
};

/// Draws types (all nodes, in order) and then each node's selection set
/// (in node order) from the stream. Every size-K subset of the other nodes
/// is equally likely.
inline SelectionTable draw_selection_table(const ModelParams& params, RandomStream& stream) {
  const ModelParams p = validate_params(params);
  SelectionTable t;
  t.types.resize(p.n);
  for (auto& type : t.types) type = stream.bernoulli(p.mu) ? NodeType::Type1 : NodeType::Type2;

  // Floyd's subset sampler over the n-1 candidates, then shifted past i.
  const std::uint32_t pool = p.n - 1;
  std::vector<char> taken(pool, 0);
  t.selections.resize(p.n);
  for (NodeId i = 0; i < p.n; ++i) {
    const std::uint32_t want = p.selections(t.types[i]);
    auto& out = t.selections[i];
    out.reserve(want);
    for (std::uint32_t j = pool - want; j < pool; ++j) {
      auto pick = static_cast<std::uint32_t>(stream.uniform_below(j + 1));
      if (taken[pick]) pick = j;
      taken[pick] = 1;
      out.push_back(pick);
    }
    for (auto& c : out) {
      taken[c] = 0;
      if (c >= i) ++c;
    }
    std::sort(out.begin(), out.end());
  }
  return t;
}

/// Nodes i and j are adjacent iff one picked the other.
inline Graph build_graph(const SelectionTable& t) {
  std::vector<Edge> pairs;
  std::size_t total = 0;
  for (const auto& s : t.selections) total += s.size();
  pairs.reserve(total);
  for (NodeId i = 0; i < t.node_count(); ++i)
    for (NodeId j : t.selections[i]) pairs.emplace_back(std::min(i, j), std::max(i, j));
  return Graph(t.node_count(), std::move(pairs));
}

/// One fresh key per unordered selected pair, stored in both endpoint rings.
inline KeyRingTable assign_keyrings(const SelectionTable& t) {
  std::vector<Edge> pairs;
  for (NodeId i = 0; i < t.node_count(); ++i)
    for (NodeId j : t.selections[i]) pairs.emplace_back(std::min(i, j), std::max(i, j));
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

  KeyRingTable r;
  r.rings.resize(t.node_count());
  for (KeyId key = 0; key < pairs.size(); ++key) {
    r.rings[pairs[key].first].push_back(key);
    r.rings[pairs[key].second].push_back(key);
  }
  for (auto& ring : r.rings) std::sort(ring.begin(), ring.end());
  r.pair_of_key = std::move(pairs);
  return r;
}

/// Links every two nodes whose rings intersect. Works from the rings alone;
/// pair_of_key is not consulted.
inline Graph shared_key_graph(const KeyRingTable& r) {
  const auto n = static_cast<std::uint32_t>(r.rings.size());
  KeyId max_key = 0;
  bool any = false;
  for (const auto& ring : r.rings)
    for (KeyId k : ring) {
      max_key = std::max(max_key, k);
      any = true;
    }
  std::vector<std::vector<NodeId>> holders(any ? max_key + 1 : 0);
  for (NodeId i = 0; i < n; ++i)
    for (KeyId k : r.rings[i]) holders[k].push_back(i);

  std::vector<Edge> pairs;
  for (const auto& h : holders)
    for (std::size_t a = 0; a < h.size(); ++a)
      for (std::size_t b = a + 1; b < h.size(); ++b) pairs.emplace_back(h[a], h[b]);
  return Graph(n, std::move(pairs));
}

struct Realization {
  SelectionTable selections;
  KeyRingTable keys;
  Graph graph;
};

/// Deterministic in (params, seed).
inline Realization generate(const ModelParams& params, std::uint64_t seed) {
  const ModelParams p = validate_params(params);
  RandomStream stream(seed);
  Realization out;
  out.selections = draw_selection_table(p, stream);
  out.keys = assign_keyrings(out.selections);
  out.graph = build_graph(out.selections);
  return out;
}

}  // namespace hkout
