#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hkout/params.hpp"

namespace hkout {

using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph on nodes 0..n-1.
///
/// Edges are stored once as (i, j) with i < j in sorted order, next to a
/// compressed adjacency structure with sorted neighbor lists. Immutable
/// after construction.
class Graph {
 public:
  Graph() = default;

  /// Builds from an arbitrary list of pairs. Orientation is ignored and
  /// duplicates collapse; self-loops and out-of-range ids are rejected.
  Graph(std::uint32_t n, std::vector<Edge> pairs) : n_(n) {
    for (auto& [a, b] : pairs) {
      if (a == b) throw std::invalid_argument("self-loop on node " + std::to_string(a));
      if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
      if (a > b) std::swap(a, b);
    }
    // Bucket by lower endpoint, then sort and dedupe each bucket.
    std::vector<std::uint32_t> start(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& e : pairs) ++start[e.first + 1];
    for (std::uint32_t v = 0; v < n; ++v) start[v + 1] += start[v];
    std::vector<NodeId> upper(pairs.size());
    {
      std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
      for (const auto& [a, b] : pairs) upper[fill[a]++] = b;
    }
    edges_.reserve(pairs.size());
    for (NodeId a = 0; a < n; ++a) {
      auto first = upper.begin() + start[a], last = upper.begin() + start[a + 1];
      std::sort(first, last);
      for (auto it = first; it != last; ++it)
        if (it == first || *it != *(it - 1)) edges_.emplace_back(a, *it);
    }
    build_adjacency();
  }

  /// Trusts `edges` to be sorted, unique and normalized to i < j < n.
  static Graph from_sorted_edges(std::uint32_t n, std::vector<Edge> edges) {
    Graph g;
    g.n_ = n;
    g.edges_ = std::move(edges);
    g.build_adjacency();
    return g;
  }

  static Graph complete(std::uint32_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) e.emplace_back(i, j);
    return Graph(n, std::move(e));
  }

  std::uint32_t node_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  std::uint32_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool adjacent(NodeId a, NodeId b) const noexcept {
    auto nb = neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
  }

  friend bool operator==(const Graph& a, const Graph& b) noexcept {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency() {
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& [a, b] : edges_) {
      ++offsets_[a + 1];
      ++offsets_[b + 1];
    }
    for (std::uint32_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
    neighbors_.resize(edges_.size() * 2);
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    // Lower neighbors first, then upper; edge order keeps each run sorted.
    for (const auto& [a, b] : edges_) neighbors_[fill[b]++] = a;
    for (const auto& [a, b] : edges_) neighbors_[fill[a]++] = b;
  }

  std::uint32_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint32_t> offsets_{0};
  std::vector<NodeId> neighbors_;
};

}  // namespace hkout
