#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wvc/graph.hpp"
#include "wvc/rational.hpp"

namespace wvc {

// .wgr text format:
//   c <comment>
//   p wvc <n> <m>
//   v <id> <weight>     one per vertex, 1-based ids, nonnegative decimals
//   e <u> <v>           one per edge, u < v
struct WgrInstance {
  Graph graph;
  std::vector<Rational> weights;
};

inline Rational parse_wgr_weight(const std::string& tok) {
  auto dot = tok.find('.');
  if (dot != std::string::npos)
    require(tok.size() - dot - 1 <= 9, errc::parse_error,
            "weight has more than 9 fraction digits: " + tok);
  Rational w = Rational::from_decimal(tok);
  require(!w.is_negative(), errc::parse_error, "negative weight: " + tok);
  return w;
}

inline WgrInstance parse_wgr(std::istream& in) {
  std::string line;
  long n = -1, m = -1;
  std::vector<Rational> weights;
  std::vector<char> weight_seen;
  std::vector<std::pair<VertexId, VertexId>> edges;
  long v_lines = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    std::string kind;
    ls >> kind;
    if (kind == "p") {
      require(n < 0, errc::parse_error, "duplicate header");
      std::string fmt;
      ls >> fmt >> n >> m;
      require(!ls.fail() && fmt == "wvc" && n >= 0 && m >= 0, errc::parse_error,
              "bad header: " + line);
      weights.assign(n, Rational(0));
      weight_seen.assign(n, 0);
    } else if (kind == "v") {
      require(n >= 0, errc::parse_error, "vertex line before header");
      long id;
      std::string wtok;
      ls >> id >> wtok;
      require(!ls.fail() && id >= 1 && id <= n, errc::parse_error, "bad vertex line: " + line);
      require(!weight_seen[id - 1], errc::parse_error,
              "duplicate weight for vertex " + std::to_string(id));
      weights[id - 1] = parse_wgr_weight(wtok);
      weight_seen[id - 1] = 1;
      ++v_lines;
    } else if (kind == "e") {
      require(n >= 0, errc::parse_error, "edge line before header");
      long u, v;
      ls >> u >> v;
      require(!ls.fail() && u >= 1 && v >= 1 && u <= n && v <= n && u < v, errc::parse_error,
              "bad edge line: " + line);
      edges.emplace_back(static_cast<VertexId>(u - 1), static_cast<VertexId>(v - 1));
    } else {
      fail(errc::parse_error, "unrecognized line: " + line);
    }
  }
  require(n >= 0, errc::parse_error, "missing header");
  require(v_lines == n, errc::parse_error,
          "expected " + std::to_string(n) + " weight lines, saw " + std::to_string(v_lines));
  require(static_cast<long>(edges.size()) == m, errc::parse_error,
          "expected " + std::to_string(m) + " edge lines, saw " +
              std::to_string(edges.size()));
  WgrInstance inst{Graph::build(static_cast<int>(n), edges), std::move(weights)};
  return inst;
}

inline void write_wgr(std::ostream& out, const Graph& g, const std::vector<Rational>& w,
                      const std::string& comment = "") {
  if (!comment.empty()) out << "c " << comment << "\n";
  out << "p wvc " << g.n_total() << " " << g.edge_count() << "\n";
  for (VertexId v = 0; v < g.n_total(); ++v)
    out << "v " << v + 1 << " " << w[v].to_decimal() << "\n";
  for (VertexId v = 0; v < g.n_total(); ++v)
    for (VertexId u : g.neighbors(v))
      if (v < u) out << "e " << v + 1 << " " << u + 1 << "\n";
}

}  // namespace wvc
