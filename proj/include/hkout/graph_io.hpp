#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hkout/graph.hpp"
#include "hkout/model.hpp"

namespace hkout {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `n <count>` followed by one `i j` line per edge, i < j, sorted.
inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << "n " << g.node_count() << '\n';
  for (const auto& [a, b] : g.edges()) os << a << ' ' << b << '\n';
}

/// Inverse of write_edge_list. Pairs may come in any order; blank lines are
/// skipped. Throws FormatError with the offending line number.
inline Graph read_edge_list(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError("edge list line " + std::to_string(line_no) + ": " + what);
  };

  std::optional<std::uint32_t> n;
  std::vector<Edge> pairs;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    if (!n) {
      std::string tag;
      long long count = -1;
      if (!(ls >> tag >> count) || tag != "n" || count < 0) throw fail("expected header `n <count>`");
      n = static_cast<std::uint32_t>(count);
    } else {
      long long a = -1, b = -1;
      if (!(ls >> a >> b)) throw fail("expected `i j`");
      if (a < 0 || b < 0 || a >= *n || b >= *n) throw fail("node id out of range");
      if (a == b) throw fail("self-loop");
      pairs.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    std::string rest;
    if (ls >> rest) throw fail("trailing content `" + rest + "`");
  }
  if (!n) throw FormatError("edge list: missing header");
  return Graph(*n, std::move(pairs));
}

/// Graphviz export. With a selection table, type-2 nodes are drawn boxed.
inline void write_dot(std::ostream& os, const Graph& g, const SelectionTable* table = nullptr) {
  os << "graph H {\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    os << "  " << v;
    if (table && table->types[v] == NodeType::Type2) os << " [shape=box]";
    os << ";\n";
  }
  for (const auto& [a, b] : g.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
}

}  // namespace hkout
