#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hkout/graph.hpp"

namespace hkout {

struct ConnectivityReport {
  std::uint32_t min_degree = 0;
  bool is_connected = false;
  std::uint32_t k_checked = 1;
  bool is_k_vertex_connected = false;
};

inline std::vector<std::uint32_t> degree_sequence(const Graph& g) {
  std::vector<std::uint32_t> d(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) d[v] = g.degree(v);
  return d;
}

/// 0 for the empty graph.
inline std::uint32_t min_degree(const Graph& g) {
  if (g.node_count() == 0) return 0;
  std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
  for (NodeId v = 0; v < g.node_count(); ++v) best = std::min(best, g.degree(v));
  return best;
}

inline bool is_connected(const Graph& g) {
  const std::uint32_t n = g.node_count();
  if (n <= 1) return true;
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{0};
  seen[0] = 1;
  std::uint32_t reached = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(v))
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == n;
}

namespace detail {

/// Union of k scan-first-search (here: BFS) forests, each grown in the graph
/// minus the previous forests. It has at most k(n-1) edges and is
/// k-vertex-connected iff g is (Cheriyan, Kao and Thurimella).
inline Graph scan_first_certificate(const Graph& g, std::uint32_t k) {
  const std::uint32_t n = g.node_count();
  const auto edges = g.edges();

  // Adjacency carrying edge ids.
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (const auto& [a, b] : edges) {
    ++offsets[a + 1];
    ++offsets[b + 1];
  }
  for (std::uint32_t v = 0; v < n; ++v) offsets[v + 1] += offsets[v];
  std::vector<std::pair<NodeId, std::uint32_t>> adj(edges.size() * 2);
  {
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t e = 0; e < edges.size(); ++e) {
      adj[fill[edges[e].first]++] = {edges[e].second, e};
      adj[fill[edges[e].second]++] = {edges[e].first, e};
    }
  }

  std::vector<char> in_forest(edges.size(), 0);
  std::vector<char> seen(n);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (std::uint32_t round = 0; round < k; ++round) {
    std::fill(seen.begin(), seen.end(), 0);
    for (NodeId root = 0; root < n; ++root) {
      if (seen[root]) continue;
      seen[root] = 1;
      queue.clear();
      queue.push_back(root);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const NodeId x = queue[head];
        for (std::uint32_t i = offsets[x]; i < offsets[x + 1]; ++i) {
          const auto [y, e] = adj[i];
          if (in_forest[e] || seen[y]) continue;
          seen[y] = 1;
          in_forest[e] = 1;
          queue.push_back(y);
        }
      }
    }
  }

  std::vector<Edge> kept;
  for (std::uint32_t e = 0; e < edges.size(); ++e)
    if (in_forest[e]) kept.push_back(edges[e]);
  return Graph::from_sorted_edges(n, std::move(kept));
}

/// Unit-capacity split network: node v becomes in(v)=2v -> out(v)=2v+1 and
/// each undirected edge {a,b} becomes out(a)->in(b) and out(b)->in(a).
/// Vertex-disjoint s-t paths correspond to units of out(s)->in(t) flow.
class VertexSplitNetwork {
 public:
  explicit VertexSplitNetwork(const Graph& g) {
    const std::uint32_t n = g.node_count();
    const std::uint32_t nodes = 2 * n;
    const std::size_t arcs = 2 * (static_cast<std::size_t>(n) + 2 * g.edge_count());
    head_.reserve(arcs);
    residual_.reserve(arcs);
    std::vector<std::uint32_t> tail;
    tail.reserve(arcs);
    auto add = [&](std::uint32_t from, std::uint32_t to) {
      head_.push_back(to);
      residual_.push_back(1);
      tail.push_back(from);
      head_.push_back(from);
      residual_.push_back(0);
      tail.push_back(to);
    };
    for (NodeId v = 0; v < n; ++v) add(2 * v, 2 * v + 1);
    for (const auto& [a, b] : g.edges()) {
      add(2 * a + 1, 2 * b);
      add(2 * b + 1, 2 * a);
    }
    original_ = residual_;

    offsets_.assign(nodes + 1, 0);
    for (std::uint32_t x : tail) ++offsets_[x + 1];
    for (std::uint32_t x = 0; x < nodes; ++x) offsets_[x + 1] += offsets_[x];
    arcs_of_.resize(tail.size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::uint32_t e = 0; e < tail.size(); ++e) arcs_of_[fill[tail[e]]++] = e;

    fmark_.assign(nodes, 0);
    bmark_.assign(nodes, 0);
    fparent_.assign(nodes, 0);
    bparent_.assign(nodes, 0);
  }

  /// Whether s and t (distinct, non-adjacent) are joined by at least
  /// `needed` internally vertex-disjoint paths. Leaves the network reset.
  bool has_disjoint_paths(NodeId s, NodeId t, std::uint32_t needed) {
    std::uint32_t found = 0;
    while (found < needed && augment(2 * s + 1, 2 * t)) ++found;
    for (std::uint32_t pair : touched_) {
      residual_[2 * pair] = original_[2 * pair];
      residual_[2 * pair + 1] = original_[2 * pair + 1];
    }
    touched_.clear();
    return found >= needed;
  }

 private:
  void push_unit(std::uint32_t arc) {
    --residual_[arc];
    ++residual_[arc ^ 1U];
    touched_.push_back(arc >> 1);
  }

  // Bidirectional BFS over the residual graph. The first node carrying both
  // marks joins two tree paths that share no other node, so the combined
  // path is simple.
  bool augment(std::uint32_t source, std::uint32_t sink) {
    if (++stamp_ == 0) {
      std::fill(fmark_.begin(), fmark_.end(), 0);
      std::fill(bmark_.begin(), bmark_.end(), 0);
      stamp_ = 1;
    }
    fmark_[source] = stamp_;
    bmark_[sink] = stamp_;
    ffront_.assign(1, source);
    bfront_.assign(1, sink);

    std::uint32_t meet = kNone;
    while (meet == kNone && !ffront_.empty() && !bfront_.empty()) {
      next_.clear();
      if (ffront_.size() <= bfront_.size()) {
        for (std::uint32_t x : ffront_) {
          for (std::uint32_t i = offsets_[x]; i < offsets_[x + 1] && meet == kNone; ++i) {
            const std::uint32_t e = arcs_of_[i];
            const std::uint32_t y = head_[e];
            if (!residual_[e] || fmark_[y] == stamp_) continue;
            fmark_[y] = stamp_;
            fparent_[y] = e;
            if (bmark_[y] == stamp_) meet = y;
            next_.push_back(y);
          }
          if (meet != kNone) break;
        }
        ffront_.swap(next_);
      } else {
        for (std::uint32_t y : bfront_) {
          for (std::uint32_t i = offsets_[y]; i < offsets_[y + 1] && meet == kNone; ++i) {
            const std::uint32_t into = arcs_of_[i] ^ 1U;  // arc x -> y
            const std::uint32_t x = head_[arcs_of_[i]];
            if (!residual_[into] || bmark_[x] == stamp_) continue;
            bmark_[x] = stamp_;
            bparent_[x] = into;
            if (fmark_[x] == stamp_) meet = x;
            next_.push_back(x);
          }
          if (meet != kNone) break;
        }
        bfront_.swap(next_);
      }
    }
    if (meet == kNone) return false;

    for (std::uint32_t v = meet; v != source;) {
      const std::uint32_t e = fparent_[v];
      push_unit(e);
      v = head_[e ^ 1U];
    }
    for (std::uint32_t v = meet; v != sink;) {
      const std::uint32_t e = bparent_[v];
      push_unit(e);
      v = head_[e];
    }
    return true;
  }

  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

  std::vector<std::uint32_t> head_;
  std::vector<std::uint8_t> residual_;
  std::vector<std::uint8_t> original_;
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> arcs_of_;
  std::vector<std::uint32_t> touched_;

  std::uint32_t stamp_ = 0;
  std::vector<std::uint32_t> fmark_, bmark_, fparent_, bparent_;
  std::vector<std::uint32_t> ffront_, bfront_, next_;
};

}  // namespace detail

/// Whether g stays connected after deleting any k-1 vertices. Graphs with
/// n <= k are never k-connected, so the complete graph on n nodes is
/// (n-1)- but not n-connected.
///
/// k = 1 is plain traversal. Otherwise the graph is first thinned to a
/// sparse certificate and a minimum-degree vertex v is fixed. The graph is
/// k-connected iff every non-neighbor of v, and every non-adjacent pair of
/// v's neighbors, is joined by k vertex-disjoint paths (Esfahanian and
/// Hakimi). Each flow stops after k paths.
///
/// Most non-neighbor flows are skipped: call x linked when x is v, a
/// neighbor of v, or has k disjoint paths to v. A vertex with k linked
/// neighbors is linked, since any separator smaller than k misses one of
/// them and that one lies in v's component. Flows run only when this
/// propagation stalls.
inline bool is_k_vertex_connected(const Graph& g, std::uint32_t k) {
  if (k == 0) throw std::invalid_argument("k-connectivity needs k >= 1");
  const std::uint32_t n = g.node_count();
  if (n <= k) return false;
  if (k == 1) return is_connected(g);
  if (min_degree(g) < k) return false;

  const Graph sparse = g.edge_count() > static_cast<std::size_t>(k) * (n - 1)
                           ? detail::scan_first_certificate(g, k)
                           : g;
  if (min_degree(sparse) < k) return false;

  NodeId v = 0;
  for (NodeId u = 1; u < n; ++u)
    if (sparse.degree(u) < sparse.degree(v)) v = u;

  detail::VertexSplitNetwork net(sparse);
  const auto nb = sparse.neighbors(v);
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (std::size_t b = a + 1; b < nb.size(); ++b)
      if (!sparse.adjacent(nb[a], nb[b]) && !net.has_disjoint_paths(nb[a], nb[b], k))
        return false;

  std::vector<char> linked(n, 0);
  std::vector<std::uint32_t> linked_neighbors(n, 0);
  std::vector<NodeId> ready;
  std::uint32_t remaining = n;
  auto link = [&](NodeId x) {
    linked[x] = 1;
    --remaining;
    for (NodeId y : sparse.neighbors(x))
      if (!linked[y] && ++linked_neighbors[y] == k) ready.push_back(y);
  };
  link(v);
  for (NodeId w : nb)
    if (!linked[w]) link(w);

  while (remaining > 0) {
    while (!ready.empty()) {
      const NodeId x = ready.back();
      ready.pop_back();
      if (!linked[x]) link(x);
    }
    if (remaining == 0) break;
    NodeId best = n;
    for (NodeId x = 0; x < n; ++x)
      if (!linked[x] && (best == n || linked_neighbors[x] > linked_neighbors[best])) best = x;
    if (!net.has_disjoint_paths(v, best, k)) return false;
    link(best);
  }
  return true;
}

inline constexpr std::uint32_t kBruteForceMaxNodes = 20;

namespace detail {

using AdjacencyMasks = std::array<std::uint32_t, kBruteForceMaxNodes>;

/// Removes every (k-1)-subset of vertices and tests the rest for
/// connectivity. False when n <= k. Requires n <= 20.
inline bool masks_k_connected(const AdjacencyMasks& adj, std::uint32_t n, std::uint32_t k) {
  if (n <= k) return false;
  const std::uint32_t all = (1U << n) - 1;
  auto connected_without = [&](std::uint32_t removed) {
    const std::uint32_t alive = all & ~removed;
    std::uint32_t reached = alive & (~alive + 1), frontier = reached;
    while (frontier) {
      std::uint32_t grow = 0;
      for (std::uint32_t f = frontier; f; f &= f - 1) grow |= adj[std::countr_zero(f)];
      grow &= alive & ~reached;
      reached |= grow;
      frontier = grow;
    }
    return reached == alive;
  };
  const std::uint32_t r = k - 1;
  if (r == 0) return connected_without(0);
  // Gosper's hack over the r-subsets of n bits.
  for (std::uint32_t s = (1U << r) - 1; s <= all;) {
    if (!connected_without(s)) return false;
    const std::uint32_t c = s & (~s + 1);
    const std::uint32_t next = s + c;
    s = (((next ^ s) >> 2) / c) | next;
  }
  return true;
}

}  // namespace detail

/// Definition-level check: remove every (k-1)-subset of vertices and test
/// what is left for connectivity. Rejects n > 20.
inline bool brute_force_k_connected(const Graph& g, std::uint32_t k) {
  const std::uint32_t n = g.node_count();
  if (n > kBruteForceMaxNodes)
    throw std::invalid_argument("brute_force_k_connected: n = " + std::to_string(n) + " exceeds 20");
  if (k == 0) throw std::invalid_argument("k-connectivity needs k >= 1");
  detail::AdjacencyMasks adj{};
  for (const auto& [a, b] : g.edges()) {
    adj[a] |= 1U << b;
    adj[b] |= 1U << a;
  }
  return detail::masks_k_connected(adj, n, k);
}

inline ConnectivityReport analyze_connectivity(const Graph& g, std::uint32_t k) {
  ConnectivityReport r;
  r.min_degree = min_degree(g);
  r.is_connected = is_connected(g);
  r.k_checked = k;
  r.is_k_vertex_connected = is_k_vertex_connected(g, k);
  return r;
}

}  // namespace hkout
