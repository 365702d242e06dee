#pragma once

#include <algorithm>
#include <vector>

#include "wvc/cover.hpp"
#include "wvc/graph.hpp"
#include "wvc/rational.hpp"

namespace wvc {

// s-t network with exact rational capacities; arcs stored with their
// residual twins back to back.
class FlowNetwork {
 public:
  explicit FlowNetwork(int n_nodes) : head_(n_nodes) {}

  int source() const { return 0; }
  int sink() const { return 1; }

  void add_arc(int from, int to, const Rational& cap) {
    head_[from].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({to, cap});
    head_[to].push_back(static_cast<int>(arcs_.size()));
    arcs_.push_back({from, Rational(0)});
  }

  // Edmonds-Karp: BFS-shortest augmenting paths; exact arithmetic throughout.
  // Returns the flow value and the source side of a minimum cut.
  std::pair<Rational, std::vector<char>> max_flow() {
    Rational total(0);
    int n = static_cast<int>(head_.size());
    std::vector<int> pred_arc(n);
    while (true) {
      std::vector<char> seen(n, 0);
      std::vector<int> queue{source()};
      seen[source()] = 1;
      bool reached = false;
      for (size_t qi = 0; qi < queue.size() && !reached; ++qi) {
        int v = queue[qi];
        for (int a : head_[v]) {
          const Arc& arc = arcs_[a];
          if (seen[arc.to] || arc.cap.is_zero()) continue;
          seen[arc.to] = 1;
          pred_arc[arc.to] = a;
          if (arc.to == sink()) {
            reached = true;
            break;
          }
          queue.push_back(arc.to);
        }
      }
      if (!reached) return {total, std::move(seen)};
      Rational push = arcs_[pred_arc[sink()]].cap;
      for (int v = sink(); v != source(); v = arcs_[pred_arc[v] ^ 1].to)
        if (arcs_[pred_arc[v]].cap < push) push = arcs_[pred_arc[v]].cap;
      for (int v = sink(); v != source(); v = arcs_[pred_arc[v] ^ 1].to) {
        arcs_[pred_arc[v]].cap -= push;
        arcs_[pred_arc[v] ^ 1].cap += push;
      }
      total += push;
    }
  }

 private:
  struct Arc {
    int to;
    Rational cap;
  };
  std::vector<std::vector<int>> head_;
  std::vector<Arc> arcs_;
};

// Minimum-weight vertex cover of a bipartite graph by weighted Koenig duality:
// source->A arcs carry w(a), B->sink arcs carry w(b), original edges become
// A->B arcs of capacity 1 + total weight (effectively unbounded). The cover is
// read off the min cut: A-side vertices cut away from the source plus B-side
// vertices still reachable.
inline std::pair<std::vector<VertexId>, Rational> min_weight_vc_bipartite(
    const Graph& g, const std::vector<Rational>& w, const std::vector<int8_t>& color) {
  auto alive = g.alive_vertices();
  Rational unbounded(1);
  for (VertexId v : alive) {
    require(color[v] == 0 || color[v] == 1, errc::invalid_coloring,
            "vertex " + std::to_string(v) + " uncolored");
    require(!w[v].is_negative(), errc::invalid_coloring, "negative weight");
    unbounded += w[v];
  }

  // network node ids: 0 = source, 1 = sink, 2 + index into alive
  std::vector<int> node_of(g.n_total(), -1);
  for (size_t i = 0; i < alive.size(); ++i) node_of[alive[i]] = static_cast<int>(i) + 2;
  FlowNetwork net(static_cast<int>(alive.size()) + 2);
  for (VertexId v : alive) {
    if (color[v] == 0)
      net.add_arc(net.source(), node_of[v], w[v]);
    else
      net.add_arc(node_of[v], net.sink(), w[v]);
  }
  for (VertexId v : alive) {
    if (color[v] != 0) continue;
    for (VertexId u : g.neighbors(v)) {
      require(color[u] == 1, errc::invalid_coloring, "monochromatic edge");
      net.add_arc(node_of[v], node_of[u], unbounded);
    }
  }

  auto [value, source_side] = net.max_flow();
  std::vector<VertexId> cover;
  Rational weight(0);
  for (VertexId v : alive) {
    bool reachable = source_side[node_of[v]] != 0;
    if ((color[v] == 0 && !reachable) || (color[v] == 1 && reachable)) {
      cover.push_back(v);
      weight += w[v];
    }
  }
  check(weight == value, "bipartite cover weight must equal the max-flow value");
  for (VertexId v : alive) {
    if (std::binary_search(cover.begin(), cover.end(), v)) continue;
    for (VertexId u : g.neighbors(v))
      check(std::binary_search(cover.begin(), cover.end(), u),
            "bipartite cover left an edge uncovered");
  }
  return {std::move(cover), std::move(weight)};
}

}  // namespace wvc
