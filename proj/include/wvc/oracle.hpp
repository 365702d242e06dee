#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "wvc/graph.hpp"
#include "wvc/rational.hpp"

namespace wvc {

struct OracleLimit {
  int max_n = 26;
};

namespace detail {

// Exhaustive branch-and-bound on (graph copy, weights): branch on a maximum
// degree vertex (take it vs take its whole neighborhood), prune on strictly
// worse weight so every minimum-weight cover is still reached, and keep the
// lexicographically smallest sorted id sequence among the minima.
class OracleSearch {
 public:
  OracleSearch(Graph g, const std::vector<Rational>* w) : g_(std::move(g)), w_(w) {}

  std::pair<std::vector<VertexId>, Rational> run() {
    chosen_.clear();
    recurse(Rational(0));
    check(best_.has_value(), "oracle search must find a cover");
    std::sort(best_->begin(), best_->end());
    return {std::move(*best_), std::move(best_weight_)};
  }

 private:
  void recurse(Rational acc) {
    if (best_ && acc > best_weight_) return;
    VertexId pick = -1;
    int best_deg = 0;
    for (VertexId v : g_.alive_vertices())
      if (g_.degree(v) > best_deg) {
        best_deg = g_.degree(v);
        pick = v;
      }
    if (pick < 0) {  // edgeless remainder: nothing more to add
      offer(acc);
      return;
    }
    std::vector<VertexId> closed(g_.neighbors(pick));
    closed.push_back(pick);

    chosen_.push_back(pick);
    auto tok = g_.delete_vertices({pick});
    recurse(acc + (*w_)[pick]);
    g_.restore(tok);
    chosen_.pop_back();

    Rational nb_weight(0);
    size_t mark = chosen_.size();
    for (VertexId u : g_.neighbors(pick)) {
      chosen_.push_back(u);
      nb_weight += (*w_)[u];
    }
    auto tok2 = g_.delete_vertices(std::span<const VertexId>(closed));
    recurse(acc + nb_weight);
    g_.restore(tok2);
    chosen_.resize(mark);
  }

  void offer(const Rational& weight) {
    if (!best_ || weight < best_weight_) {
      best_ = chosen_;
      std::sort(best_->begin(), best_->end());
      best_weight_ = weight;
      return;
    }
    if (weight == best_weight_) {
      std::vector<VertexId> cand = chosen_;
      std::sort(cand.begin(), cand.end());
      if (std::lexicographical_compare(cand.begin(), cand.end(), best_->begin(), best_->end()))
        best_ = std::move(cand);
    }
  }

  Graph g_;
  const std::vector<Rational>* w_;
  std::vector<VertexId> chosen_;
  std::optional<std::vector<VertexId>> best_;
  Rational best_weight_;
};

}  // namespace detail

inline std::pair<std::vector<VertexId>, Rational> exact_min_weight_vc(
    const Graph& g, const std::vector<Rational>& w, OracleLimit limit = {}) {
  require(g.alive_count() <= limit.max_n, errc::too_large,
          "oracle limited to " + std::to_string(limit.max_n) + " vertices");
  for (VertexId v : g.alive_vertices())
    require(!w[v].is_negative(), errc::too_large, "negative weight");
  // work on a compacted copy so recursion never disturbs the caller's journal
  auto alive = g.alive_vertices();
  std::vector<int> local(g.n_total(), -1);
  for (size_t i = 0; i < alive.size(); ++i) local[alive[i]] = static_cast<int>(i);
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<Rational> lw(alive.size());
  for (VertexId v : alive) {
    lw[local[v]] = w[v];
    for (VertexId u : g.neighbors(v))
      if (v < u) edges.emplace_back(local[v], local[u]);
  }
  detail::OracleSearch search(Graph::build(static_cast<int>(alive.size()), edges), &lw);
  auto [cover_local, weight] = search.run();
  std::vector<VertexId> cover;
  cover.reserve(cover_local.size());
  for (VertexId v : cover_local) cover.push_back(alive[v]);
  std::sort(cover.begin(), cover.end());
  return {std::move(cover), std::move(weight)};
}

// Rule-2 terminal: exact solve of one connected component of size <= 10.
inline std::pair<std::vector<VertexId>, Rational> solve_small_component(
    const Graph& g, const std::vector<VertexId>& component, const std::vector<Rational>& w) {
  require(component.size() <= 10, errc::component_too_large,
          "component larger than 10 vertices");
  std::vector<VertexId> sorted = component;
  std::sort(sorted.begin(), sorted.end());
  auto comps = g.connected_components();
  bool found = false;
  for (const auto& c : comps)
    if (c == sorted) found = true;
  require(found, errc::not_a_component, "vertex set is not a connected component");

  std::vector<int> local(g.n_total(), -1);
  for (size_t i = 0; i < sorted.size(); ++i) local[sorted[i]] = static_cast<int>(i);
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<Rational> lw(sorted.size());
  for (VertexId v : sorted) {
    lw[local[v]] = w[v];
    for (VertexId u : g.neighbors(v))
      if (v < u) edges.emplace_back(local[v], local[u]);
  }
  detail::OracleSearch search(Graph::build(static_cast<int>(sorted.size()), edges), &lw);
  auto [cover_local, weight] = search.run();
  std::vector<VertexId> cover;
  for (VertexId v : cover_local) cover.push_back(sorted[v]);
  std::sort(cover.begin(), cover.end());
  return {std::move(cover), std::move(weight)};
}

}  // namespace wvc
