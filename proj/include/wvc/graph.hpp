#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wvc/error.hpp"

namespace wvc {

using VertexId = int;

// Opaque handle for one delete_vertices frame; frames restore LIFO.
struct MutationToken {
  int frame = -1;
};

// Mutable undirected simple graph over a fixed id universe [0, n_total).
// Vertex deletion pushes a journal frame that restore() pops; ids are stable
// and never reused. Neighbor lists are kept sorted for deterministic scans.
class Graph {
 public:
  Graph() = default;

  static Graph build(int n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
    Graph g;
    require(n >= 0, errc::id_out_of_range, "negative vertex count");
    g.adj_.assign(n, {});
    g.alive_.assign(n, 1);
    g.alive_count_ = n;
    for (auto [u, v] : edges) {
      require(u >= 0 && u < n && v >= 0 && v < n, errc::id_out_of_range,
              "edge endpoint out of range");
      require(u != v, errc::self_loop, "self loop on vertex " + std::to_string(u));
      g.adj_[u].push_back(v);
      g.adj_[v].push_back(u);
    }
    for (VertexId v = 0; v < n; ++v) {
      auto& nb = g.adj_[v];
      std::sort(nb.begin(), nb.end());
      require(std::adjacent_find(nb.begin(), nb.end()) == nb.end(), errc::duplicate_edge,
              "duplicate edge at vertex " + std::to_string(v));
      g.edge_count_ += static_cast<long>(nb.size());
    }
    g.edge_count_ /= 2;
    return g;
  }

  int n_total() const { return static_cast<int>(adj_.size()); }
  int alive_count() const { return alive_count_; }
  long edge_count() const { return edge_count_; }
  bool is_alive(VertexId v) const { return v >= 0 && v < n_total() && alive_[v]; }
  int degree(VertexId v) const { return static_cast<int>(adj_[v].size()); }
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }

  bool adjacent(VertexId u, VertexId v) const {
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
  }

  std::vector<VertexId> alive_vertices() const {
    std::vector<VertexId> out;
    out.reserve(alive_count_);
    for (VertexId v = 0; v < n_total(); ++v)
      if (alive_[v]) out.push_back(v);
    return out;
  }

  int max_degree() const {
    int d = 0;
    for (VertexId v = 0; v < n_total(); ++v)
      if (alive_[v]) d = std::max(d, degree(v));
    return d;
  }

  MutationToken delete_vertices(std::span<const VertexId> vs) {
    {
      std::vector<VertexId> sorted(vs.begin(), vs.end());
      std::sort(sorted.begin(), sorted.end());
      require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
              errc::vertex_not_alive, "duplicate vertex in delete set");
      for (VertexId v : sorted)
        require(is_alive(v), errc::vertex_not_alive,
                "delete of dead or unknown vertex " + std::to_string(v));
    }
    Frame frame;
    frame.removed.reserve(vs.size());
    for (VertexId v : vs) {
      frame.removed.emplace_back(v, std::move(adj_[v]));
      adj_[v].clear();
      for (VertexId u : frame.removed.back().second) {
        auto& nb = adj_[u];
        nb.erase(std::lower_bound(nb.begin(), nb.end(), v));
        --edge_count_;
      }
      alive_[v] = 0;
      --alive_count_;
    }
    journal_.push_back(std::move(frame));
    return MutationToken{static_cast<int>(journal_.size()) - 1};
  }

  MutationToken delete_vertices(std::initializer_list<VertexId> vs) {
    return delete_vertices(std::span<const VertexId>(vs.begin(), vs.size()));
  }

  void restore(MutationToken token) {
    require(!journal_.empty() && token.frame == static_cast<int>(journal_.size()) - 1,
            errc::out_of_order_restore, "tokens must restore in LIFO order");
    Frame frame = std::move(journal_.back());
    journal_.pop_back();
    for (auto it = frame.removed.rbegin(); it != frame.removed.rend(); ++it) {
      VertexId v = it->first;
      alive_[v] = 1;
      ++alive_count_;
      adj_[v] = std::move(it->second);
      for (VertexId u : adj_[v]) {
        auto& nb = adj_[u];
        nb.insert(std::lower_bound(nb.begin(), nb.end(), v), v);
        ++edge_count_;
      }
    }
  }

  int journal_depth() const { return static_cast<int>(journal_.size()); }

  // Partition of the alive vertices into maximal connected sets, each sorted,
  // ordered by smallest member.
  std::vector<std::vector<VertexId>> connected_components() const {
    std::vector<std::vector<VertexId>> comps;
    std::vector<char> seen(n_total(), 0);
    std::vector<VertexId> stack;
    for (VertexId s = 0; s < n_total(); ++s) {
      if (!alive_[s] || seen[s]) continue;
      std::vector<VertexId> comp;
      stack.push_back(s);
      seen[s] = 1;
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        comp.push_back(v);
        for (VertexId u : adj_[v])
          if (!seen[u]) {
            seen[u] = 1;
            stack.push_back(u);
          }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  struct Bipartition {
    bool is_bipartite = false;
    std::vector<int8_t> color;        // 0/1 for alive vertices, -1 otherwise
    std::vector<VertexId> odd_cycle;  // nonempty odd closed walk when not bipartite
  };

  // Two-colors each component by BFS from its lowest id; on failure returns an
  // odd cycle assembled from the two tree paths of a conflicting edge.
  Bipartition bipartition() const {
    Bipartition out;
    out.color.assign(n_total(), -1);
    std::vector<VertexId> parent(n_total(), -1);
    std::vector<int> depth(n_total(), 0);
    std::vector<VertexId> queue;
    for (VertexId s = 0; s < n_total(); ++s) {
      if (!alive_[s] || out.color[s] >= 0) continue;
      out.color[s] = 0;
      queue.assign(1, s);
      for (size_t qi = 0; qi < queue.size(); ++qi) {
        VertexId v = queue[qi];
        for (VertexId u : adj_[v]) {
          if (out.color[u] < 0) {
            out.color[u] = static_cast<int8_t>(1 - out.color[v]);
            parent[u] = v;
            depth[u] = depth[v] + 1;
            queue.push_back(u);
          } else if (out.color[u] == out.color[v]) {
            out.odd_cycle = extract_cycle(v, u, parent, depth);
            return out;
          }
        }
      }
    }
    out.is_bipartite = true;
    return out;
  }

 private:
  static std::vector<VertexId> extract_cycle(VertexId a, VertexId b,
                                             const std::vector<VertexId>& parent,
                                             const std::vector<int>& depth) {
    std::vector<VertexId> pa, pb;
    while (depth[a] > depth[b]) { pa.push_back(a); a = parent[a]; }
    while (depth[b] > depth[a]) { pb.push_back(b); b = parent[b]; }
    while (a != b) {
      pa.push_back(a); a = parent[a];
      pb.push_back(b); b = parent[b];
    }
    pa.push_back(a);
    pa.insert(pa.end(), pb.rbegin(), pb.rend());
    return pa;
  }

  struct Frame {
    std::vector<std::pair<VertexId, std::vector<VertexId>>> removed;
  };

  std::vector<std::vector<VertexId>> adj_;
  std::vector<char> alive_;
  std::vector<Frame> journal_;
  int alive_count_ = 0;
  long edge_count_ = 0;
};

}  // namespace wvc
