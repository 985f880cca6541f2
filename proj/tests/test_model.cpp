#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "hkout/graph_io.hpp"
#include "hkout/model.hpp"
#include "hkout/connectivity.hpp"
#include "hkout/analytics.hpp"

using namespace hkout;

namespace {

ModelParams params(std::uint32_t n, double mu, std::uint32_t k1, std::uint32_t k2) {
  ModelParams p;
  p.n = n;
  p.mu = mu;
  p.k1 = k1;
  p.k2 = k2;
  return p;
}

SelectionTable table(std::vector<NodeType> types, std::vector<std::vector<NodeId>> sel) {
  return SelectionTable{std::move(types), std::move(sel)};
}

// Five nodes: node 0 is type-2 with two picks, the rest type-1 with one.
SelectionTable five_node_instance() {
  using enum NodeType;
  return table({Type2, Type1, Type1, Type1, Type1}, {{1, 2}, {0}, {3}, {4}, {2}});
}

}  // namespace

TEST_CASE("random stream is reproducible and in range", "[rng]") {
  RandomStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    (void)c();
  }
  RandomStream s(7);
  for (int i = 0; i < 10000; ++i) {
    CHECK(s.uniform_below(5) < 5);
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(RandomStream(1)() != RandomStream(2)());
}

TEST_CASE("derive_seed is order sensitive", "[rng]") {
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
}

TEST_CASE("validate_params accepts and flags regime", "[params]") {
  const auto ok = validate_params(params(500, 0.5, 1, 13));
  CHECK(ok.in_regime);

  const auto homo = validate_params(params(10, 0.0, 2, 2));
  CHECK_FALSE(homo.in_regime);

  CHECK_FALSE(validate_params(params(10, 1.0, 1, 2)).in_regime);
  CHECK_FALSE(validate_params(params(10, 0.5, 1, 1)).in_regime);
  CHECK(validate_params(params(10, 0.5, 1, 9)).in_regime);
}

TEST_CASE("validate_params names the first violated bound", "[params]") {
  auto message = [](const ModelParams& p) {
    try {
      validate_params(p);
    } catch (const ParamError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK_THAT(message(params(3, 0.5, 1, 3)), Catch::Matchers::ContainsSubstring("k2 <= n-1 violated"));
  CHECK_THAT(message(params(3, 0.5, 1, 3)), Catch::Matchers::ContainsSubstring("k2 = 3"));
  CHECK_THAT(message(params(1, 0.5, 1, 1)), Catch::Matchers::ContainsSubstring("n >= 2"));
  CHECK_THAT(message(params(5, 1.5, 1, 2)), Catch::Matchers::ContainsSubstring("mu"));
  CHECK_THAT(message(params(5, std::nan(""), 1, 2)), Catch::Matchers::ContainsSubstring("mu"));
  CHECK_THAT(message(params(5, 0.5, 0, 2)), Catch::Matchers::ContainsSubstring("k1 >= 1"));
  CHECK_THAT(message(params(5, 0.5, 3, 2)), Catch::Matchers::ContainsSubstring("k1 <= k2"));
  CHECK_THAT(message(params(5, 0.5, 1, 0)), Catch::Matchers::ContainsSubstring("k2 >= 1"));
  CHECK(message(params(5, 0.5, 1, 4)).empty());
}

TEST_CASE("graph normalizes and rejects bad edges", "[graph]") {
  Graph g(4, {{2, 1}, {1, 2}, {0, 3}, {3, 0}, {1, 0}});
  CHECK(g.edge_count() == 3);
  CHECK(std::vector<Edge>(g.edges().begin(), g.edges().end()) == std::vector<Edge>{{0, 1}, {0, 3}, {1, 2}});
  CHECK(g.adjacent(1, 0));
  CHECK(g.adjacent(0, 1));
  CHECK_FALSE(g.adjacent(2, 3));
  CHECK(g.degree(0) == 2);
  CHECK(std::vector<NodeId>(g.neighbors(0).begin(), g.neighbors(0).end()) == std::vector<NodeId>{1, 3});

  CHECK_THROWS_AS(Graph(3, {{1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(Graph(3, {{0, 3}}), std::invalid_argument);

  const Graph k4 = Graph::complete(4);
  CHECK(k4.edge_count() == 6);
  for (NodeId v = 0; v < 4; ++v) CHECK(k4.degree(v) == 3);
}

TEST_CASE("neighbor lists are sorted and symmetric", "[graph]") {
  const auto r = generate(params(60, 0.4, 1, 4), 11);
  const Graph& g = r.graph;
  std::size_t degree_sum = 0;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    const auto nb = g.neighbors(v);
    CHECK(std::is_sorted(nb.begin(), nb.end()));
    CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
    for (NodeId w : nb) {
      CHECK(w != v);
      CHECK(g.adjacent(w, v));
    }
    degree_sum += nb.size();
  }
  CHECK(degree_sum == 2 * g.edge_count());
}

TEST_CASE("selection tables are deterministic and well formed", "[model]") {
  const auto p = params(50, 0.3, 1, 5);
  RandomStream s1(99), s2(99);
  const auto t1 = draw_selection_table(p, s1);
  const auto t2 = draw_selection_table(p, s2);
  CHECK(t1 == t2);
  CHECK(t1.consistent_with(validate_params(p)));

  RandomStream s3(5);
  const auto homo = draw_selection_table(params(4, 0.0, 1, 2), s3);
  for (NodeId i = 0; i < 4; ++i) {
    CHECK(homo.types[i] == NodeType::Type2);
    CHECK(homo.selections[i].size() == 2);
  }
}

TEST_CASE("type fraction matches mu", "[model][statistical]") {
  const auto p = params(4, 0.5, 1, 2);
  RandomStream s(2024);
  const int draws = 100000;
  std::uint64_t type1 = 0;
  for (int i = 0; i < draws; ++i) {
    const auto t = draw_selection_table(p, s);
    for (auto ty : t.types) type1 += ty == NodeType::Type1;
  }
  const double total = 4.0 * draws;
  const double se = std::sqrt(0.25 / total);
  CHECK(std::abs(type1 / total - 0.5) <= 3 * se);
}

TEST_CASE("selection subsets are uniform", "[model][statistical]") {
  // Node 0 of a homogeneous n=6, K=3 model: C(5,3) = 10 equally likely subsets.
  const auto p = params(6, 0.0, 1, 3);
  RandomStream s(77);
  std::map<std::vector<NodeId>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) counts[draw_selection_table(p, s).selections[0]]++;
  CHECK(counts.size() == 10);
  const double q = 0.1, se = std::sqrt(q * (1 - q) / draws);
  for (const auto& [subset, c] : counts) {
    CHECK(std::find(subset.begin(), subset.end(), 0U) == subset.end());
    CHECK(std::abs(static_cast<double>(c) / draws - q) <= 4 * se);
  }
}

TEST_CASE("build_graph follows the either-picks rule", "[model]") {
  using enum NodeType;
  const auto g = build_graph(table({Type1, Type1, Type1}, {{1}, {0}, {0}}));
  CHECK(g == Graph(3, {{0, 1}, {0, 2}}));

  const auto mutual = build_graph(table({Type1, Type1}, {{1}, {0}}));
  CHECK(mutual.edge_count() == 1);

  const auto t = five_node_instance();
  const auto fig = build_graph(t);
  std::set<Edge> pairs;
  for (NodeId i = 0; i < 5; ++i)
    for (NodeId j : t.selections[i]) pairs.insert({std::min(i, j), std::max(i, j)});
  CHECK(fig.edge_count() == pairs.size());
  CHECK(fig.edge_count() <= 6);
  CHECK(fig.edge_count() == 5);  // 0->1 and 1->0 collapse
}

TEST_CASE("key rings: one key per selected pair", "[model]") {
  using enum NodeType;
  const auto t = table({Type1, Type1, Type1}, {{1}, {0}, {1}});
  const auto r = assign_keyrings(t);
  REQUIRE(r.key_count() == 2);
  CHECK(r.pair_of_key[0] == Edge{0, 1});
  CHECK(r.pair_of_key[1] == Edge{1, 2});
  CHECK(r.rings[0] == std::vector<KeyId>{0});
  CHECK(r.rings[1] == std::vector<KeyId>{0, 1});
  CHECK(r.rings[2] == std::vector<KeyId>{1});
}

TEST_CASE("key ring invariants and shared-key graph on random tables", "[model]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    RandomStream s(seed);
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(s.uniform_below(30));
    const std::uint32_t k2 = 1 + static_cast<std::uint32_t>(s.uniform_below(n - 1));
    const auto p = params(n, s.uniform01(), 1, k2);
    const auto t = draw_selection_table(p, s);
    const auto r = assign_keyrings(t);
    const auto g = build_graph(t);

    CHECK(r.key_count() == g.edge_count());
    std::vector<int> holders(r.key_count(), 0);
    for (NodeId i = 0; i < n; ++i)
      for (KeyId k : r.rings[i]) {
        ++holders[k];
        const auto [a, b] = r.pair_of_key[k];
        CHECK((a == i || b == i));
      }
    for (int h : holders) CHECK(h == 2);
    for (const auto& [a, b] : r.pair_of_key) CHECK((t.picks(a, b) || t.picks(b, a)));

    CHECK(shared_key_graph(r) == g);
  }
  const auto t = five_node_instance();
  CHECK(shared_key_graph(assign_keyrings(t)) == build_graph(t));
}

TEST_CASE("nodes never paired share no edge", "[model]") {
  using enum NodeType;
  const auto t = table({Type1, Type1, Type1, Type1}, {{1}, {0}, {3}, {2}});
  const auto g = shared_key_graph(assign_keyrings(t));
  CHECK_FALSE(g.adjacent(0, 2));
  CHECK_FALSE(g.adjacent(1, 3));
  CHECK(g.edge_count() == 2);
}

TEST_CASE("generate is deterministic and degree-bounded", "[model]") {
  const auto p = params(500, 0.5, 1, 13);
  const auto a = generate(p, 1), b = generate(p, 1);
  CHECK(a.selections == b.selections);
  CHECK(a.keys == b.keys);
  CHECK(a.graph == b.graph);
  CHECK(min_degree(a.graph) >= 1);
  CHECK_FALSE(generate(p, 2).graph == a.graph);

  CHECK(min_degree(generate(params(500, 0.0, 2, 2), 1).graph) >= 2);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = generate(params(80, 0.3, 1, 6), seed);
    for (NodeId i = 0; i < 80; ++i) {
      CHECK(r.graph.degree(i) >= r.selections.selections[i].size());
      CHECK(r.graph.degree(i) <= 79);
    }
  }
  CHECK_THROWS_AS(generate(params(3, 0.5, 1, 3), 1), ParamError);
}

TEST_CASE("pick and edge frequencies match closed forms", "[model][statistical]") {
  const auto p = params(10, 0.5, 1, 3);
  const double mean_k = mean_selection(p.mu, p.k2);
  const double pick = mean_k / 9.0;
  const double edge = edge_probability(10, mean_k);
  const int draws = 200000;
  int picks = 0, edges = 0;
  for (int t = 0; t < draws; ++t) {
    RandomStream s(derive_seed(31337, t));
    const auto tab = draw_selection_table(p, s);
    picks += tab.picks(3, 7);
    edges += tab.picks(3, 7) || tab.picks(7, 3);
  }
  CHECK(std::abs(static_cast<double>(picks) / draws - pick) <= 3 * std::sqrt(pick * (1 - pick) / draws));
  CHECK(std::abs(static_cast<double>(edges) / draws - edge) <= 3 * std::sqrt(edge * (1 - edge) / draws));
}

TEST_CASE("edge list round trip", "[io]") {
  const auto g = generate(params(40, 0.5, 1, 3), 5).graph;
  std::stringstream ss;
  write_edge_list(ss, g);
  const std::string text = ss.str();
  CHECK(text.rfind("n 40\n", 0) == 0);
  CHECK(read_edge_list(ss) == g);

  std::stringstream again;
  write_edge_list(again, g);
  CHECK(again.str() == text);
}

TEST_CASE("edge list reader is strict", "[io]") {
  auto parse = [](const std::string& s) {
    std::istringstream is(s);
    return read_edge_list(is);
  };
  CHECK(parse("n 3\n0 1\n\n1 2\n") == Graph(3, {{0, 1}, {1, 2}}));
  CHECK(parse("n 3\n2 1\n") == Graph(3, {{1, 2}}));
  CHECK(parse("n 0\n").node_count() == 0);
  CHECK_THROWS_AS(parse(""), FormatError);
  CHECK_THROWS_AS(parse("0 1\n"), FormatError);
  CHECK_THROWS_AS(parse("n 3\n0 3\n"), FormatError);
  CHECK_THROWS_AS(parse("n 3\n1 1\n"), FormatError);
  CHECK_THROWS_AS(parse("n 3\n0 1 2\n"), FormatError);
  CHECK_THROWS_AS(parse("n 3\n0\n"), FormatError);
  CHECK_THROWS_AS(parse("n 3\n0 -1\n"), FormatError);
  try {
    parse("n 3\n0 1\nx y\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 3"));
  }
}

TEST_CASE("dot export marks type-2 nodes", "[io]") {
  const auto t = five_node_instance();
  std::ostringstream os;
  write_dot(os, build_graph(t), &t);
  const std::string dot = os.str();
  CHECK(dot.rfind("graph H {", 0) == 0);
  CHECK(dot.find("0 [shape=box];") != std::string::npos);
  CHECK(dot.find("1 [shape=box]") == std::string::npos);
  CHECK(dot.find("0 -- 1;") != std::string::npos);
  CHECK(dot.back() == '\n');
}
