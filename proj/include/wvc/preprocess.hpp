#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wvc/cover.hpp"
#include "wvc/graph.hpp"

namespace wvc {

namespace detail {

// Branch-and-reduce minimum-size vertex cover on an adjacency-set scratch
// structure that supports degree-2 folding (fold vertices get fresh ids).
class MinVcSearch {
 public:
  explicit MinVcSearch(const Graph& g) {
    int n = g.n_total();
    adj_.resize(n);
    alive_.assign(n, 0);
    for (VertexId v : g.alive_vertices()) {
      alive_[v] = 1;
      ++alive_count_;
      for (VertexId u : g.neighbors(v)) adj_[v].insert(u);
    }
  }

  std::vector<VertexId> run() {
    best_size_ = alive_count_ + 1;
    peak_ids_ = adj_.size();
    search(0);
    // replay fold records against the winning solution, newest first
    std::vector<char> sol(peak_ids_, 0);
    for (VertexId v : best_) sol[v] = 1;
    for (auto it = best_folds_.rbegin(); it != best_folds_.rend(); ++it) {
      if (sol[it->folded]) {
        sol[it->folded] = 0;
        sol[it->a] = 1;
        sol[it->b] = 1;
      } else {
        sol[it->v] = 1;
      }
    }
    std::vector<VertexId> out;
    for (size_t v = 0; v < sol.size(); ++v)
      if (sol[v] && v < original_n()) out.push_back(static_cast<VertexId>(v));
    return out;
  }

 private:
  struct Fold {
    VertexId folded;  // fresh vertex replacing the triple
    VertexId v, a, b; // degree-2 vertex and its nonadjacent neighbors
  };
  struct Undo {
    // restore_edge: edge (v,u) was removed, re-add it on undo
    // drop_edge: edge (v,u) was created by a fold, erase it on undo
    enum Kind { remove_vertex, add_vertex, restore_edge, drop_edge } kind;
    VertexId v, u;
  };

  size_t original_n() const { return alive_.size() - fold_count_; }

  void remove_vertex(VertexId v, std::vector<Undo>& undo) {
    for (VertexId u : adj_[v]) {
      adj_[u].erase(v);
      undo.push_back({Undo::restore_edge, v, u});
    }
    saved_adj_.push_back({v, std::move(adj_[v])});
    adj_[v].clear();
    alive_[v] = 0;
    --alive_count_;
    undo.push_back({Undo::remove_vertex, v, -1});
  }

  void undo_all(std::vector<Undo>& undo) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      switch (it->kind) {
        case Undo::remove_vertex: {
          check(saved_adj_.back().first == it->v, "fold journal out of order");
          adj_[it->v] = std::move(saved_adj_.back().second);
          saved_adj_.pop_back();
          alive_[it->v] = 1;
          ++alive_count_;
          break;
        }
        case Undo::add_vertex: {
          check(it->v == static_cast<VertexId>(adj_.size()) - 1, "fold vertex out of order");
          adj_.pop_back();
          alive_.pop_back();
          --alive_count_;
          --fold_count_;
          break;
        }
        case Undo::restore_edge:
          adj_[it->v].insert(it->u);
          adj_[it->u].insert(it->v);
          break;
        case Undo::drop_edge:
          adj_[it->v].erase(it->u);
          adj_[it->u].erase(it->v);
          break;
      }
    }
    undo.clear();
  }

  // Applies degree-0/1/2 reductions exhaustively; returns extra cover count.
  int reduce(std::vector<Undo>& undo, std::vector<VertexId>& taken,
             std::vector<Fold>& folds) {
    int added = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      for (VertexId v = 0; v < static_cast<VertexId>(adj_.size()); ++v) {
        if (!alive_[v]) continue;
        size_t d = adj_[v].size();
        if (d == 0) {
          remove_vertex(v, undo);
          changed = true;
        } else if (d == 1) {
          VertexId u = *adj_[v].begin();
          taken.push_back(u);
          ++added;
          remove_vertex(u, undo);
          remove_vertex(v, undo);
          changed = true;
        } else if (d == 2) {
          auto it = adj_[v].begin();
          VertexId a = *it++;
          VertexId b = *it;
          if (adj_[a].count(b)) {  // triangle: take both neighbors
            taken.push_back(a);
            taken.push_back(b);
            added += 2;
            remove_vertex(a, undo);
            remove_vertex(b, undo);
            remove_vertex(v, undo);
          } else {  // fold v,a,b into a fresh vertex
            std::set<VertexId> merged;
            for (VertexId x : adj_[a])
              if (x != v) merged.insert(x);
            for (VertexId x : adj_[b])
              if (x != v) merged.insert(x);
            remove_vertex(a, undo);
            remove_vertex(b, undo);
            remove_vertex(v, undo);
            VertexId f = static_cast<VertexId>(adj_.size());
            adj_.emplace_back();
            alive_.push_back(1);
            peak_ids_ = std::max(peak_ids_, adj_.size());
            ++alive_count_;
            ++fold_count_;
            undo.push_back({Undo::add_vertex, f, -1});
            for (VertexId x : merged) {
              adj_[f].insert(x);
              adj_[x].insert(f);
              undo.push_back({Undo::drop_edge, f, x});
            }
            folds.push_back({f, v, a, b});
            ++added;  // folding accounts for one forced cover vertex
          }
          changed = true;
        }
      }
    }
    return added;
  }

  int matching_lower_bound() const {
    std::vector<char> used(adj_.size(), 0);
    int m = 0;
    for (VertexId v = 0; v < static_cast<VertexId>(adj_.size()); ++v) {
      if (!alive_[v] || used[v]) continue;
      for (VertexId u : adj_[v])
        if (!used[u]) {
          used[v] = used[u] = 1;
          ++m;
          break;
        }
    }
    return m;
  }

  void search(int count) {
    std::vector<Undo> undo;
    std::vector<VertexId> taken;
    size_t fold_mark = cur_folds_.size();
    count += reduce(undo, taken, cur_folds_);
    for (VertexId v : taken) cur_sol_.push_back(v);

    if (count + matching_lower_bound() >= best_size_) {
      // cannot improve; equal-size alternatives are not needed here
    } else if (alive_count_ == 0) {
      best_size_ = count;
      best_ = cur_sol_;
      best_folds_ = cur_folds_;
    } else {
      VertexId pick = -1;
      size_t best_deg = 0;
      for (VertexId v = 0; v < static_cast<VertexId>(adj_.size()); ++v)
        if (alive_[v] && adj_[v].size() > best_deg) {
          best_deg = adj_[v].size();
          pick = v;
        }
      check(pick >= 0 && best_deg >= 3, "reduced graph must have min degree 3");

      std::vector<VertexId> nbrs(adj_[pick].begin(), adj_[pick].end());
      {
        std::vector<Undo> u2;
        cur_sol_.push_back(pick);
        remove_vertex(pick, u2);
        search(count + 1);
        undo_all(u2);
        cur_sol_.pop_back();
      }
      {
        std::vector<Undo> u2;
        for (VertexId u : nbrs) cur_sol_.push_back(u);
        for (VertexId u : nbrs) remove_vertex(u, u2);
        remove_vertex(pick, u2);
        search(count + static_cast<int>(nbrs.size()));
        undo_all(u2);
        cur_sol_.resize(cur_sol_.size() - nbrs.size());
      }
    }

    cur_sol_.resize(cur_sol_.size() - taken.size());
    cur_folds_.resize(fold_mark);
    undo_all(undo);
  }

  std::vector<std::set<VertexId>> adj_;
  std::vector<char> alive_;
  std::vector<std::pair<VertexId, std::set<VertexId>>> saved_adj_;
  int alive_count_ = 0;
  int fold_count_ = 0;

  std::vector<VertexId> cur_sol_, best_;
  std::vector<Fold> cur_folds_, best_folds_;
  int best_size_ = 0;
  size_t peak_ids_ = 0;
};

}  // namespace detail

// Minimum-cardinality vertex cover (unweighted), exact.
inline std::vector<VertexId> min_size_vc(const Graph& g) {
  detail::MinVcSearch search(g);
  return search.run();
}

struct FMapping {
  struct Entry {
    std::array<VertexId, 2> pair;
    VertexId witness;
  };
  std::map<std::array<VertexId, 3>, Entry> entries;
};

struct FStatus {
  bool satisfied = true;
  std::vector<std::array<VertexId, 3>> uncovered;
};

// Fresh witness map over CCS3(G,U): for each triangle, the lowest-id outside
// neighbor of the triangle that is adjacent to both vertices of some CC2 pair
// (then the lowest such pair).
inline std::pair<FMapping, FStatus> compute_f(const Graph& g, const std::vector<char>& in_U) {
  CoverPartition p = partition_cover(g, in_U);
  FMapping f;
  FStatus status;
  for (const auto& tri : p.ccs3) {
    std::vector<VertexId> candidates;
    for (VertexId c : tri)
      for (VertexId x : g.neighbors(c))
        if (!p.in_U(x)) candidates.push_back(x);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::optional<FMapping::Entry> entry;
    for (VertexId x : candidates) {
      std::optional<std::array<VertexId, 2>> best_pair;
      for (VertexId y : g.neighbors(x)) {
        if (p.vclass[y] != VClass::pair) continue;
        VertexId mate = p.partner[y];
        if (!g.adjacent(x, mate)) continue;
        std::array<VertexId, 2> pr{std::min(y, mate), std::max(y, mate)};
        if (!best_pair || pr < *best_pair) best_pair = pr;
      }
      if (best_pair) {
        entry = FMapping::Entry{*best_pair, x};
        break;
      }
    }
    if (entry)
      f.entries[tri] = *entry;
    else {
      status.satisfied = false;
      status.uncovered.push_back(tri);
    }
  }
  return {f, status};
}

// Establishes the witness property on top of a minimum-size cover: repeated
// swaps of a triangle vertex with its unique outside neighbor (size-preserving
// and cover-preserving) while the number of uncovered triangles strictly
// drops, bounded by |V| rounds. The status reports any remaining gap.
inline std::tuple<std::vector<char>, FMapping, FStatus> establish_f_property(
    const Graph& g, std::vector<char> in_U) {
  auto [f, status] = compute_f(g, in_U);
  int budget = g.n_total();
  while (!status.satisfied && budget-- > 0) {
    size_t before = status.uncovered.size();
    bool swapped = false;
    for (const auto& tri : status.uncovered) {
      for (VertexId c : tri) {
        VertexId outside = -1;
        int outside_count = 0;
        for (VertexId x : g.neighbors(c))
          if (!in_U[x]) {
            outside = x;
            ++outside_count;
          }
        if (outside_count != 1) continue;
        std::vector<char> candidate = in_U;
        candidate[c] = 0;
        candidate[outside] = 1;
        auto [f2, status2] = compute_f(g, candidate);
        if (status2.uncovered.size() < before) {
          in_U = std::move(candidate);
          f = std::move(f2);
          status = std::move(status2);
          swapped = true;
        }
        if (swapped) break;
      }
      if (swapped) break;
    }
    if (!swapped) break;
  }
  return {std::move(in_U), std::move(f), std::move(status)};
}

}  // namespace wvc
