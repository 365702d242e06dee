#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "wvc/bipartite.hpp"
#include "wvc/cover.hpp"
#include "wvc/graph.hpp"
#include "wvc/oracle.hpp"
#include "wvc/preprocess.hpp"
#include "wvc/rational.hpp"
#include "wvc/trace.hpp"

namespace wvc {

struct EngineConfig {
  bool strict_f = false;  // error out when a triangle has no witness; else B2 fallback
  Rational alpha = kDefaultAlpha;
  Rational beta = kDefaultBeta;
  TraceSink* sink = nullptr;
  bool validate = true;  // re-check every cover returned by a recursive call
};

struct SolveOutcome {
  std::vector<VertexId> cover;
  Rational weight;
};

struct SolveStats {
  long leaves = 0;
  long nodes = 0;
  std::map<int, long> rule_counts;  // 1..13 plus 0 for the robust B2 fallback
  long robust_fallbacks = 0;
  int t = 0;
  Rational m1_root;
  bool has_switch = false;  // first phase switch on the DFS-first path
  Rational m2_at_switch, M_at_switch;
  long m_at_switch = 0;
  bool f_satisfied_at_root = true;
};

namespace detail {

inline std::vector<VertexId> merge_cover(std::vector<VertexId> a,
                                         const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// The recursive procedure: applies the first applicable of thirteen rules in
// priority order. The graph and cover flags are mutated in place and restored
// on unwind; the weight map carries journal-scoped overlays for rule 8.
class Engine {
 public:
  Engine(Graph& g, std::vector<Rational> w, std::vector<char> in_U, EngineConfig cfg,
         SolveStats* stats)
      : g_(g), w_(std::move(w)), in_U_(std::move(in_U)), cfg_(cfg), stats_(stats) {}

  std::vector<VertexId> run() { return wvc_alg(0, 0); }

 private:
  // ---- helpers ------------------------------------------------------------

  bool in_U(VertexId v) const { return in_U_[v] != 0; }

  Rational weight_of(const std::vector<VertexId>& cover) const {
    Rational s(0);
    for (VertexId v : cover) s += w_[v];
    return s;
  }

  std::vector<VertexId> closed_neighborhood(VertexId v) const {
    std::vector<VertexId> s(g_.neighbors(v));
    s.insert(std::lower_bound(s.begin(), s.end(), v), v);
    return s;
  }

  int u_degree(VertexId v) const {
    int d = 0;
    for (VertexId u : g_.neighbors(v))
      if (in_U(u)) ++d;
    return d;
  }

  Measures snapshot() const {
    CoverPartition p = partition_cover(g_, in_U_);
    return measures(g_, p, cfg_.alpha, cfg_.beta);
  }

  template <typename F>
  auto with_child(int idx, F&& f) {
    if (cfg_.sink) cfg_.sink->on_child_enter(idx);
    auto r = f();
    if (cfg_.sink) cfg_.sink->on_child_exit(idx);
    return r;
  }

  void count_rule(int rule) {
    ++stats_->nodes;
    ++stats_->rule_counts[rule];
  }

  void emit(TraceEvent& ev) {
    if (cfg_.sink) cfg_.sink->on_event(ev);
  }

  TraceEvent make_event(int rule, int q, int depth, bool branching, int child_count) {
    TraceEvent ev;
    ev.seq = ++seq_;
    ev.rule = rule;
    ev.q = q;
    ev.depth = depth;
    ev.branching = branching;
    ev.child_count = child_count;
    if (cfg_.sink) ev.before = snapshot();
    return ev;
  }

  int pairs_touched(const CoverPartition& p, std::span<const VertexId> vs) const {
    int count = 0;
    std::vector<std::array<VertexId, 2>> seen;
    for (VertexId v : vs) {
      if (v < static_cast<VertexId>(p.vclass.size()) && p.vclass[v] == VClass::pair) {
        std::array<VertexId, 2> pr{std::min(v, p.partner[v]), std::max(v, p.partner[v])};
        if (std::find(seen.begin(), seen.end(), pr) == seen.end()) {
          seen.push_back(pr);
          ++count;
        }
      }
    }
    return count;
  }

  // ---- rule selection and dispatch ----------------------------------------

  std::vector<VertexId> wvc_alg(int q, int depth) {
    int journal_before = g_.journal_depth();
    std::vector<VertexId> cover = apply_first_rule(q, depth);
    check(g_.journal_depth() == journal_before, "rule left the journal unbalanced");
    if (cfg_.validate) {
      for (VertexId v : g_.alive_vertices()) {
        if (std::binary_search(cover.begin(), cover.end(), v)) continue;
        for (VertexId u : g_.neighbors(v))
          check(std::binary_search(cover.begin(), cover.end(), u),
                "recursive call returned a non-cover");
      }
    }
    return cover;
  }

  std::vector<VertexId> apply_first_rule(int q, int depth) {
    // Rule 1: bipartite terminal
    auto bip = g_.bipartition();
    if (bip.is_bipartite) return r1_bipartite(q, depth, bip);

    // Rule 2: small component
    auto comps = g_.connected_components();
    for (const auto& comp : comps)
      if (comp.size() <= 10) return r2_small_component(q, depth, comp);

    // Rule 3: cover vertex with no outside neighbor
    for (VertexId v = 0; v < g_.n_total(); ++v) {
      if (!g_.is_alive(v) || !in_U(v)) continue;
      bool outside = false;
      for (VertexId u : g_.neighbors(v))
        if (!in_U(u)) outside = true;
      if (!outside) return r3_drop_internal(q, depth, v);
    }

    CoverPartition part = partition_cover(g_, in_U_);

    // Rules 4/5 slot: triangle components of G[U]
    if (!part.cc3.empty()) return r45_triangles(q, depth, part);

    // Rule 6: path end u - v with |N(v) cap U| = 2
    for (VertexId u = 0; u < g_.n_total(); ++u) {
      if (!g_.is_alive(u) || !in_U(u) || u_degree(u) != 1) continue;
      VertexId v = -1;
      for (VertexId y : g_.neighbors(u))
        if (in_U(y)) v = y;
      if (u_degree(v) == 2) return r6_path(q, depth, u, v);
    }

    // Rule 7: cycle vertex
    for (VertexId v = 0; v < g_.n_total(); ++v)
      if (g_.is_alive(v) && in_U(v) && u_degree(v) == 2) return r7_cycle(q, depth, v, part);

    // Rule 8: degree-1 fold
    for (VertexId v = 0; v < g_.n_total(); ++v)
      if (g_.is_alive(v) && g_.degree(v) == 1) return r8_fold_degree1(q, depth, v);

    // Rule 9: reducible triangle
    if (auto tri = find_rule9_witness()) return r9_triangle_reduce(q, depth, *tri);

    // Rule 10: phase switch
    if (q == 0) return r10_set_phase(depth, part);

    // Rules 11/12: pair branchings under q = 2
    if (q == 2) {
      check(part.good, "q=2 requires a good cover");
      for (VertexId v = 0; v < g_.n_total(); ++v) {
        if (!g_.is_alive(v) || part.vclass[v] != VClass::pair || !part.in_ccs2[v]) continue;
        if (potential(g_, part, v).sign() > 0) return r11_strong_pair(q, depth, v, part);
      }
      for (VertexId v = 0; v < g_.n_total(); ++v) {
        if (!g_.is_alive(v) || part.vclass[v] != VClass::pair || part.in_ccs2[v]) continue;
        if (potential(g_, part, v).sign() > 0) return r12_weak_pair(q, depth, v, part);
      }
    }

    // Rule 13: final pair branch
    for (VertexId v = 0; v < g_.n_total(); ++v)
      if (g_.is_alive(v) && in_U(v) && u_degree(v) == 1)
        return r13_final(q, depth, v, part);

    fail(errc::stuck_state, "no rule applicable");
  }

  // ---- terminals and reductions --------------------------------------------

  std::vector<VertexId> r1_bipartite(int q, int depth, const Graph::Bipartition& bip) {
    count_rule(1);
    ++stats_->leaves;
    TraceEvent ev = make_event(1, q, depth, false, 0);
    emit(ev);
    auto [cover, wt] = min_weight_vc_bipartite(g_, w_, bip.color);
    return cover;
  }

  std::vector<VertexId> r2_small_component(int q, int depth, const std::vector<VertexId>& comp) {
    count_rule(2);
    auto [comp_cover, comp_weight] = solve_small_component(g_, comp, w_);
    TraceEvent ev = make_event(2, q, depth, false, 1);
    ev.witness.component = comp;
    if (cfg_.sink) {
      CoverPartition p = partition_cover(g_, in_U_);
      ev.pairs_touched = pairs_touched(p, comp);
    }
    auto tok = g_.delete_vertices(std::span<const VertexId>(comp));
    if (cfg_.sink) ev.after = snapshot();
    emit(ev);
    auto rest = with_child(0, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok);
    return merge_cover(std::move(rest), comp_cover);
  }

  std::vector<VertexId> r3_drop_internal(int q, int depth, VertexId v) {
    count_rule(3);
    TraceEvent ev = make_event(3, q, depth, false, 1);
    ev.witness.v = v;
    if (cfg_.sink) {
      CoverPartition p = partition_cover(g_, in_U_);
      ev.pairs_touched = pairs_touched(p, std::array{v});
    }
    in_U_[v] = 0;
    if (cfg_.sink) ev.after = snapshot();
    emit(ev);
    auto rest = with_child(0, [&] { return wvc_alg(q, depth + 1); });
    in_U_[v] = 1;
    return rest;
  }

  std::vector<VertexId> r8_fold_degree1(int q, int depth, VertexId v) {
    count_rule(8);
    VertexId u = g_.neighbors(v)[0];
    TraceEvent ev = make_event(8, q, depth, false, 1);
    ev.witness.v = v;
    ev.witness.v_partner = u;
    if (w_[v] >= w_[u]) {
      if (cfg_.sink) {
        CoverPartition p = partition_cover(g_, in_U_);
        ev.pairs_touched = pairs_touched(p, std::array{u, v});
      }
      auto tok = g_.delete_vertices({u, v});
      if (cfg_.sink) ev.after = snapshot();
      emit(ev);
      auto rest = with_child(0, [&] { return wvc_alg(q, depth + 1); });
      g_.restore(tok);
      return merge_cover(std::move(rest), {u});
    }
    if (cfg_.sink) {
      CoverPartition p = partition_cover(g_, in_U_);
      ev.pairs_touched = pairs_touched(p, std::array{v});
    }
    Rational saved = w_[u];
    w_[u] = w_[u] - w_[v];
    auto tok = g_.delete_vertices({v});
    if (cfg_.sink) ev.after = snapshot();
    emit(ev);
    auto rest = with_child(0, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok);
    w_[u] = saved;
    if (std::binary_search(rest.begin(), rest.end(), u)) return rest;
    return merge_cover(std::move(rest), {v});
  }

  struct Rule9Witness {
    std::array<VertexId, 3> triangle;
    VertexId v1, v2;  // the branch-eligible two
    VertexId v4 = -1;
  };

  std::optional<Rule9Witness> find_rule9_witness() const {
    for (VertexId a = 0; a < g_.n_total(); ++a) {
      if (!g_.is_alive(a)) continue;
      const auto& na = g_.neighbors(a);
      for (size_t i = 0; i < na.size(); ++i) {
        if (na[i] < a) continue;
        for (size_t j = i + 1; j < na.size(); ++j) {
          VertexId b = na[i], c = na[j];
          if (!g_.adjacent(b, c)) continue;
          std::array<VertexId, 3> tri{a, b, c};
          std::vector<VertexId> deg2;
          for (VertexId t : tri)
            if (g_.degree(t) == 2) deg2.push_back(t);
          if (deg2.size() >= 2) return Rule9Witness{tri, deg2[0], deg2[1], -1};
          // v4 with N(v4) = {p, q}, outside the triangle
          for (int pi = 0; pi < 3; ++pi)
            for (int qi = pi + 1; qi < 3; ++qi) {
              VertexId p = tri[pi], qq = tri[qi];
              for (VertexId z : g_.neighbors(p)) {
                if (z == tri[0] || z == tri[1] || z == tri[2]) continue;
                if (g_.degree(z) == 2 && g_.adjacent(z, qq))
                  return Rule9Witness{tri, p, qq, z};
              }
            }
        }
      }
    }
    return std::nullopt;
  }

  std::vector<VertexId> r9_triangle_reduce(int q, int depth, const Rule9Witness& wit) {
    count_rule(9);
    VertexId vi = w_[wit.v2] < w_[wit.v1] ? wit.v2 : wit.v1;
    TraceEvent ev = make_event(9, q, depth, false, 1);
    ev.witness.triangle = wit.triangle;
    ev.witness.v = vi;
    ev.witness.x1 = wit.v4;
    if (cfg_.sink) {
      CoverPartition p = partition_cover(g_, in_U_);
      ev.pairs_touched = pairs_touched(p, std::array{vi});
    }
    auto tok = g_.delete_vertices({vi});
    if (cfg_.sink) ev.after = snapshot();
    emit(ev);
    auto rest = with_child(0, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok);
    return merge_cover(std::move(rest), {vi});
  }

  std::vector<VertexId> r10_set_phase(int depth, const CoverPartition& part) {
    count_rule(10);
    check(part.good, "rule 10 requires a good cover");
    Measures ms = measures(g_, part, cfg_.alpha, cfg_.beta);
    int qprime =
        Rational(part.n_vcc1) >= cfg_.beta * Rational(part.n_vcc2) ? 1 : 2;
    if (qprime == 1)
      check(ms.m2 <= ms.m1, "m2 must not exceed m1 at a q=1 switch");
    if (!stats_->has_switch) {
      stats_->has_switch = true;
      stats_->m2_at_switch = ms.m2;
      stats_->M_at_switch = ms.M;
      stats_->m_at_switch = ms.m;
    }
    TraceEvent ev = make_event(10, 0, depth, false, 1);
    ev.qprime = qprime;
    ev.before = ms;
    ev.after = ms;
    emit(ev);
    return with_child(0, [&] { return wvc_alg(qprime, depth + 1); });
  }

  // ---- base branchings ------------------------------------------------------

  // Rule (B1): take v versus take N(v). Ties go to the include branch.
  std::vector<VertexId> apply_b1(int q, int depth, VertexId v, int child_base) {
    auto tok = g_.delete_vertices({v});
    auto inc = with_child(child_base, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok);
    inc = merge_cover(std::move(inc), {v});

    std::vector<VertexId> open(g_.neighbors(v));
    auto closed = closed_neighborhood(v);
    auto tok2 = g_.delete_vertices(std::span<const VertexId>(closed));
    auto exc = with_child(child_base + 1, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok2);
    exc = merge_cover(std::move(exc), open);

    return weight_of(exc) < weight_of(inc) ? exc : inc;
  }

  // Rule (B2): take every 2-subset of a triangle component.
  std::vector<VertexId> apply_b2(int q, int depth, const std::array<VertexId, 3>& tri,
                                 int child_base) {
    std::optional<std::vector<VertexId>> best;
    Rational best_w;
    int child = child_base;
    for (int skip = 2; skip >= 0; --skip) {  // A = {tri[i] : i != skip}, lex order
      std::array<VertexId, 2> a{tri[(skip + 1) % 3], tri[(skip + 2) % 3]};
      std::sort(a.begin(), a.end());
      auto tok = g_.delete_vertices({a[0], a[1]});
      auto sub = with_child(child++, [&] { return wvc_alg(q, depth + 1); });
      g_.restore(tok);
      auto cand = merge_cover(std::move(sub), {a[0], a[1]});
      Rational cw = weight_of(cand);
      if (!best || cw < best_w) {
        best = std::move(cand);
        best_w = cw;
      }
    }
    return std::move(*best);
  }

  // ---- numbered branching rules ---------------------------------------------

  std::vector<VertexId> r45_triangles(int q, int depth, const CoverPartition& part) {
    check(part.cc3.size() == part.ccs3.size(),
          "triangle with a common outside neighbor survived rule 2");
    auto [f, fstatus] = compute_f(g_, in_U_);

    if (!f.entries.empty()) {
      std::map<std::array<VertexId, 2>, std::vector<std::array<VertexId, 3>>> by_pair;
      for (const auto& [tri, entry] : f.entries) by_pair[entry.pair].push_back(tri);
      for (const auto& [tri, entry] : f.entries)
        if (by_pair[entry.pair].size() == 1) return r4_single_triangle(q, depth, tri, entry);
      for (const auto& [tri, entry] : f.entries) {
        const auto& sharers = by_pair[entry.pair];
        if (sharers.size() >= 2 && sharers[0] == tri)
          return r5_twin_triangles(q, depth, sharers[0], sharers[1], entry);
      }
      check(false, "triangle entries exist but neither rule 4 nor rule 5 applies");
    }

    // no witnessed triangle at all
    if (cfg_.strict_f)
      fail(errc::f_property_violation,
           "no witness for any triangle component of G[U]");
    ++stats_->robust_fallbacks;
    const auto& tri = fstatus.uncovered.front();
    count_rule(0);
    TraceEvent ev = make_event(0, q, depth, true, 3);
    ev.witness.triangle = tri;
    ev.fallback = true;
    if (cfg_.sink) {
      for (int skip = 2; skip >= 0; --skip) {
        std::array<VertexId, 2> a{tri[(skip + 1) % 3], tri[(skip + 2) % 3]};
        std::sort(a.begin(), a.end());
        ev.branch_after.push_back(eval_deleted({{a[0], a[1]}}));
      }
    }
    emit(ev);
    return apply_b2(q, depth, tri, 0);
  }

  // Measures after sequentially deleting the given sets (each evaluated
  // against the then-current graph), with optional U-removals applied last.
  Measures eval_deleted(const std::vector<std::vector<VertexId>>& steps,
                        const std::vector<VertexId>& u_off = {}) {
    std::vector<MutationToken> toks;
    for (const auto& s : steps) {
      std::vector<VertexId> present;
      for (VertexId v : s)
        if (g_.is_alive(v)) present.push_back(v);
      toks.push_back(g_.delete_vertices(std::span<const VertexId>(present)));
    }
    std::vector<VertexId> flipped;
    for (VertexId v : u_off)
      if (g_.is_alive(v) && in_U(v) && !has_any_outside(v)) {
        in_U_[v] = 0;
        flipped.push_back(v);
      }
    Measures ms = snapshot();
    for (VertexId v : flipped) in_U_[v] = 1;
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) g_.restore(*it);
    return ms;
  }

  bool has_any_outside(VertexId v) const {
    for (VertexId u : g_.neighbors(v))
      if (!in_U(u)) return true;
    return false;
  }

  std::vector<VertexId> r4_single_triangle(int q, int depth,
                                           const std::array<VertexId, 3>& tri,
                                           const FMapping::Entry& entry) {
    count_rule(4);
    VertexId v = entry.pair[0];
    TraceEvent ev = make_event(4, q, depth, true, 4);
    ev.witness.triangle = tri;
    ev.witness.f_pair = entry.pair;
    ev.witness.f_witness = entry.witness;
    ev.witness.v = v;
    if (cfg_.sink) {
      for (int skip = 2; skip >= 0; --skip) {
        std::array<VertexId, 2> a{tri[(skip + 1) % 3], tri[(skip + 2) % 3]};
        std::sort(a.begin(), a.end());
        ev.branch_after.push_back(eval_deleted({{v}, {a[0], a[1]}}));
      }
      ev.branch_after.push_back(
          eval_deleted({closed_neighborhood(v)}, {tri[0], tri[1], tri[2]}));
    }
    emit(ev);

    auto tok = g_.delete_vertices({v});
    auto sub = apply_b2(q, depth, tri, 0);
    g_.restore(tok);
    auto include = merge_cover(std::move(sub), {v});

    std::vector<VertexId> open(g_.neighbors(v));
    auto closed = closed_neighborhood(v);
    auto tok2 = g_.delete_vertices(std::span<const VertexId>(closed));
    auto rest = with_child(3, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok2);
    auto exclude = merge_cover(std::move(rest), open);

    return weight_of(exclude) < weight_of(include) ? exclude : include;
  }

  std::vector<VertexId> r5_twin_triangles(int q, int depth,
                                          const std::array<VertexId, 3>& tri,
                                          const std::array<VertexId, 3>& tri2,
                                          const FMapping::Entry& entry) {
    count_rule(5);
    VertexId v = entry.pair[0];
    TraceEvent ev = make_event(5, q, depth, true, 10);
    ev.witness.triangle = tri;
    ev.witness.triangle2 = tri2;
    ev.witness.f_pair = entry.pair;
    ev.witness.f_witness = entry.witness;
    ev.witness.v = v;
    if (cfg_.sink) {
      for (int s1 = 2; s1 >= 0; --s1)
        for (int s2 = 2; s2 >= 0; --s2) {
          std::array<VertexId, 2> a{tri[(s1 + 1) % 3], tri[(s1 + 2) % 3]};
          std::array<VertexId, 2> b{tri2[(s2 + 1) % 3], tri2[(s2 + 2) % 3]};
          ev.branch_after.push_back(
              eval_deleted({{v}, {a[0], a[1]}, {b[0], b[1]}}));
        }
      ev.branch_after.push_back(
          eval_deleted({closed_neighborhood(v)},
                       {tri[0], tri[1], tri[2], tri2[0], tri2[1], tri2[2]}));
    }
    emit(ev);

    auto tok = g_.delete_vertices({v});
    std::optional<std::vector<VertexId>> best;
    Rational best_w;
    int child = 0;
    for (int skip = 2; skip >= 0; --skip) {
      std::array<VertexId, 2> a{tri[(skip + 1) % 3], tri[(skip + 2) % 3]};
      std::sort(a.begin(), a.end());
      auto tok2 = g_.delete_vertices({a[0], a[1]});
      auto sub = apply_b2(q, depth, tri2, child);
      child += 3;
      g_.restore(tok2);
      auto cand = merge_cover(std::move(sub), {a[0], a[1]});
      Rational cw = weight_of(cand);
      if (!best || cw < best_w) {
        best = std::move(cand);
        best_w = cw;
      }
    }
    g_.restore(tok);
    auto include = merge_cover(std::move(*best), {v});

    std::vector<VertexId> open(g_.neighbors(v));
    auto closed = closed_neighborhood(v);
    auto tok3 = g_.delete_vertices(std::span<const VertexId>(closed));
    auto rest = with_child(9, [&] { return wvc_alg(q, depth + 1); });
    g_.restore(tok3);
    auto exclude = merge_cover(std::move(rest), open);

    return weight_of(exclude) < weight_of(include) ? exclude : include;
  }

  std::vector<VertexId> r6_path(int q, int depth, VertexId u, VertexId v) {
    count_rule(6);
    TraceEvent ev = make_event(6, q, depth, true, 2);
    ev.witness.v = v;
    ev.witness.u1 = u;
    if (cfg_.sink) {
      ev.branch_after.push_back(eval_deleted({{v}}));
      ev.branch_after.push_back(eval_deleted({closed_neighborhood(v)}));
    }
    emit(ev);
    return apply_b1(q, depth, v, 0);
  }

  std::vector<VertexId> r7_cycle(int q, int depth, VertexId v, const CoverPartition& part) {
    count_rule(7);
    // component of v in G[U] is a chordless cycle here; walk it from v
    std::vector<VertexId> cycle{v};
    {
      VertexId prev = v;
      std::vector<VertexId> first_nbrs;
      for (VertexId y : g_.neighbors(v))
        if (in_U(y)) first_nbrs.push_back(y);
      check(first_nbrs.size() == 2, "rule 7 vertex must have two cover neighbors");
      VertexId cur = first_nbrs[0];
      while (cur != v) {
        cycle.push_back(cur);
        VertexId next = -1;
        for (VertexId y : g_.neighbors(cur))
          if (in_U(y) && y != prev) next = y;
        check(next != -1, "rule 7 component is not a cycle");
        prev = cur;
        cur = next;
      }
    }
    int len = static_cast<int>(cycle.size());
    check(len >= 4, "rule 7 cycle must have length >= 4");

    TraceEvent ev = make_event(7, q, depth, true, 2);
    ev.witness.v = v;
    ev.witness.component = cycle;
    ev.cycle_len = len;
    if (cfg_.sink) {
      VertexId v2 = cycle[2];
      if (len <= 5) {
        ev.branch_after.push_back(eval_deleted({{v, v2}}));
        ev.branch_after.push_back(eval_deleted({{v}, closed_neighborhood(v2)}));
        ev.branch_after.push_back(eval_deleted({closed_neighborhood(v)}));
      } else {
        VertexId v3 = cycle[3], v4 = cycle[4];
        ev.branch_after.push_back(eval_deleted({{v, v2, v4}}));
        ev.branch_after.push_back(eval_deleted({{v, v2}, closed_neighborhood(v4)}));
        ev.branch_after.push_back(eval_deleted({{v}, closed_neighborhood(v2)}));
        ev.branch_after.push_back(eval_deleted({closed_neighborhood(v), {v3}}));
        ev.branch_after.push_back(eval_deleted({closed_neighborhood(v), closed_neighborhood(v3)}));
      }
    }
    emit(ev);
    (void)part;
    return apply_b1(q, depth, v, 0);
  }

  // Nested (B1) on u1 and optionally u2; candidate order include-include,
  // include-exclude, exclude-include, exclude-exclude with first-wins ties.
  std::vector<VertexId> nested_b1(int q, int depth, VertexId u1, VertexId u2) {
    if (u2 < 0) return apply_b1(q, depth, u1, 0);
    std::optional<std::vector<VertexId>> best;
    Rational best_w;
    int child = 0;
    for (int outer = 0; outer < 2; ++outer) {
      std::vector<VertexId> outer_add;
      MutationToken tok;
      if (outer == 0) {
        tok = g_.delete_vertices({u1});
        outer_add = {u1};
      } else {
        outer_add = g_.neighbors(u1);
        auto closed = closed_neighborhood(u1);
        tok = g_.delete_vertices(std::span<const VertexId>(closed));
      }
      for (int inner = 0; inner < 2; ++inner) {
        std::vector<VertexId> inner_add;
        MutationToken tok2;
        if (inner == 0) {
          tok2 = g_.delete_vertices({u2});
          inner_add = {u2};
        } else {
          inner_add = g_.neighbors(u2);
          auto closed = closed_neighborhood(u2);
          tok2 = g_.delete_vertices(std::span<const VertexId>(closed));
        }
        auto sub = with_child(child++, [&] { return wvc_alg(q, depth + 1); });
        g_.restore(tok2);
        auto cand = merge_cover(std::move(sub), inner_add);
        cand = merge_cover(std::move(cand), outer_add);
        Rational cw = weight_of(cand);
        if (!best || cw < best_w) {
          best = std::move(cand);
          best_w = cw;
        }
      }
      g_.restore(tok);
    }
    return std::move(*best);
  }

  // Eager measures for the final (all-excluded) branch of rules 11/12: delete
  // the closed neighborhoods, then run the forced micro-chain on the handful
  // of named vertices (U-drop of v/v', degree-1 folds, triangle reduce).
  Measures eval_pair_branch_tail(const std::vector<std::vector<VertexId>>& steps,
                                 VertexId v, VertexId vp, VertexId x, VertexId x1,
                                 VertexId x2) {
    std::vector<MutationToken> toks;
    for (const auto& s : steps) {
      std::vector<VertexId> present;
      for (VertexId y : s)
        if (g_.is_alive(y)) present.push_back(y);
      toks.push_back(g_.delete_vertices(std::span<const VertexId>(present)));
    }
    std::vector<VertexId> flipped;
    std::array<VertexId, 5> scope{v, vp, x, x1, x2};
    bool progress = true;
    while (progress) {
      progress = false;
      for (VertexId y : {v, vp}) {
        if (y < 0 || !g_.is_alive(y) || !in_U(y) || has_any_outside(y)) continue;
        in_U_[y] = 0;
        flipped.push_back(y);
        progress = true;
      }
      for (VertexId y : scope) {
        if (y < 0 || !g_.is_alive(y) || g_.degree(y) != 1) continue;
        VertexId u = g_.neighbors(y)[0];
        if (w_[y] >= w_[u])
          toks.push_back(g_.delete_vertices({y, u}));
        else
          toks.push_back(g_.delete_vertices({y}));
        progress = true;
      }
      // rule-9 guard confined to the triangle (v, v', x)
      if (x >= 0 && g_.is_alive(v) && g_.is_alive(vp) && g_.is_alive(x) &&
          in_U(v) && in_U(vp) && g_.adjacent(v, vp) && g_.adjacent(v, x) &&
          g_.adjacent(vp, x)) {
        std::array<VertexId, 3> tri{v, vp, x};
        std::vector<VertexId> deg2;
        for (VertexId t : tri)
          if (g_.degree(t) == 2) deg2.push_back(t);
        VertexId b1 = -1, b2 = -1;
        if (deg2.size() >= 2) {
          b1 = deg2[0];
          b2 = deg2[1];
        } else {
          for (int pi = 0; pi < 3 && b1 < 0; ++pi)
            for (int qi = pi + 1; qi < 3 && b1 < 0; ++qi)
              for (VertexId z : g_.neighbors(tri[pi]))
                if (z != tri[0] && z != tri[1] && z != tri[2] && g_.degree(z) == 2 &&
                    g_.adjacent(z, tri[qi])) {
                  b1 = tri[pi];
                  b2 = tri[qi];
                  break;
                }
        }
        if (b1 >= 0) {
          VertexId vi = w_[b2] < w_[b1] ? b2 : b1;
          toks.push_back(g_.delete_vertices({vi}));
          progress = true;
        }
      }
    }
    Measures ms = snapshot();
    for (VertexId y : flipped) in_U_[y] = 1;
    for (auto it = toks.rbegin(); it != toks.rend(); ++it) g_.restore(*it);
    return ms;
  }

  std::vector<VertexId> r11_strong_pair(int q, int depth, VertexId v,
                                        const CoverPartition& part) {
    count_rule(11);
    VertexId vp = part.partner[v];
    std::vector<VertexId> outs;
    for (VertexId y : g_.neighbors(v))
      if (y != vp) outs.push_back(y);
    check(!outs.empty() && outs.size() <= 2, "rule 11 expects one or two outside neighbors");
    for (VertexId y : outs) check(!in_U(y), "outside neighbor of a pair vertex is in U");

    VertexId x1 = -1, x2 = -1;
    if (outs.size() == 1) {
      x1 = outs[0];
      check(classify_outside(g_, part, x1) != OutsideClass::bad,
            "x1 must not be bad when the potential is positive");
    } else {
      auto ca = classify_outside(g_, part, outs[0]);
      auto cb = classify_outside(g_, part, outs[1]);
      check(ca != OutsideClass::bad && cb != OutsideClass::bad,
            "positive potential excludes bad neighbors");
      if (cb == OutsideClass::good) {
        x1 = outs[0];
        x2 = outs[1];
      } else {
        check(ca == OutsideClass::good, "one of the two outside neighbors must be good");
        x1 = outs[1];
        x2 = outs[0];
      }
    }

    VertexId u1 = -1;
    for (VertexId y : g_.neighbors(x1))
      if (y != v && part.vclass[y] == VClass::pair) {
        u1 = y;
        break;
      }
    if (u1 < 0) fail(errc::witness_not_found, "rule 11: no pair vertex beside v in N(x1)");
    check(u1 != vp, "u1 must differ from the partner of v");
    VertexId u1p = part.partner[u1];

    VertexId u2 = -1;
    if (x2 >= 0 && !g_.adjacent(u1, x2)) {
      std::vector<VertexId> n2;
      for (VertexId y : g_.neighbors(x2))
        if (y != v) n2.push_back(y);
      bool only_u1p = n2.size() == 1 && n2[0] == u1p;
      if (!only_u1p) {
        for (VertexId y : n2)
          if (y != u1p) {
            u2 = y;
            break;
          }
        if (u2 < 0) fail(errc::witness_not_found, "rule 11: u2 candidates exhausted");
        check(part.vclass[u2] == VClass::pair, "u2 must lie in VCC2");
        check(u2 != v && u2 != vp && u2 != u1 && u2 != u1p, "u2 must be a fresh vertex");
        check(part.partner[u2] != u1 && part.partner[u2] != u1p,
              "u1,u1',u2,u2' must be pairwise distinct");
      }
    }

    TraceEvent ev = make_event(11, q, depth, true, u2 >= 0 ? 4 : 2);
    ev.witness.v = v;
    ev.witness.v_partner = vp;
    ev.witness.x1 = x1;
    ev.witness.x2 = x2;
    ev.witness.u1 = u1;
    ev.witness.u1_partner = u1p;
    ev.witness.u2 = u2;
    ev.witness.u2_partner = u2 >= 0 ? part.partner[u2] : -1;
    ev.u2_defined = u2 >= 0;
    if (cfg_.sink) {
      if (u2 >= 0) {
        ev.branch_after.push_back(eval_deleted({{u1}, {u2}}));
        ev.branch_after.push_back(eval_deleted({{u1}, closed_neighborhood(u2)}));
        ev.branch_after.push_back(eval_deleted({closed_neighborhood(u1), {u2}}));
        ev.branch_after.push_back(eval_pair_branch_tail(
            {closed_neighborhood(u1), closed_neighborhood(u2)}, v, vp, -1, x1, x2));
      } else {
        ev.branch_after.push_back(eval_deleted({{u1}}));
        ev.branch_after.push_back(eval_pair_branch_tail({closed_neighborhood(u1)}, v, vp,
                                                        -1, x1, x2));
      }
    }
    emit(ev);
    return nested_b1(q, depth, u1, u2);
  }

  std::vector<VertexId> r12_weak_pair(int q, int depth, VertexId v,
                                      const CoverPartition& part) {
    count_rule(12);
    VertexId vp = part.partner[v];
    VertexId x = -1;  // common outside neighbor of the pair
    for (VertexId y : g_.neighbors(v))
      if (y != vp && g_.adjacent(y, vp)) {
        x = y;
        break;
      }
    check(x >= 0, "a pair outside VCCS2 has a common outside neighbor");

    std::vector<VertexId> a_set;
    for (VertexId y : g_.neighbors(v))
      if (y != vp) a_set.push_back(y);
    for (VertexId y : g_.neighbors(vp))
      if (y != v) a_set.push_back(y);
    std::sort(a_set.begin(), a_set.end());
    a_set.erase(std::unique(a_set.begin(), a_set.end()), a_set.end());
    std::erase_if(a_set, [&](VertexId y) {
      for (VertexId z : g_.neighbors(y))
        if (z != v && z != vp) return false;
      return true;
    });
    check(a_set.size() == 2 || a_set.size() == 3, "rule 12 requires |A| in {2,3}");

    VertexId x1 = -1, x2 = -1;
    if (a_set.size() == 2) {
      for (VertexId y : a_set)
        if (classify_outside(g_, part, y) != OutsideClass::bad) {
          x1 = y;
          break;
        }
      if (x1 < 0) fail(errc::witness_not_found, "rule 12: no non-bad vertex in A");
    } else {
      for (VertexId y : a_set)
        if (classify_outside(g_, part, y) == OutsideClass::good) {
          x2 = y;
          break;
        }
      if (x2 < 0) fail(errc::witness_not_found, "rule 12: no good vertex in A");
      for (VertexId y : a_set)
        if (y != x2 && classify_outside(g_, part, y) != OutsideClass::bad) {
          x1 = y;
          break;
        }
      if (x1 < 0) fail(errc::witness_not_found, "rule 12: no second non-bad vertex in A");
    }

    VertexId u1 = -1;
    for (VertexId y : g_.neighbors(x1))
      if (y != v && y != vp && part.vclass[y] == VClass::pair) {
        u1 = y;
        break;
      }
    if (u1 < 0) fail(errc::witness_not_found, "rule 12: no pair vertex in N(x1) beyond the pair");
    VertexId u1p = part.partner[u1];

    VertexId u2 = -1;
    if (a_set.size() == 3 && !g_.adjacent(u1, x2)) {
      std::vector<VertexId> n2;
      for (VertexId y : g_.neighbors(x2))
        if (y != v && y != vp) n2.push_back(y);
      bool only_u1p = n2.size() == 1 && n2[0] == u1p;
      if (!only_u1p) {
        for (VertexId y : n2)
          if (y != u1p) {
            u2 = y;
            break;
          }
        if (u2 < 0) fail(errc::witness_not_found, "rule 12: u2 candidates exhausted");
        check(part.vclass[u2] == VClass::pair, "u2 must lie in VCC2");
        check(u2 != v && u2 != vp && u2 != u1 && u2 != u1p, "u2 must be a fresh vertex");
      }
    }

    TraceEvent ev = make_event(12, q, depth, true, u2 >= 0 ? 4 : 2);
    ev.witness.v = v;
    ev.witness.v_partner = vp;
    ev.witness.x1 = x1;
    ev.witness.x2 = x2;
    ev.witness.u1 = u1;
    ev.witness.u1_partner = u1p;
    ev.witness.u2 = u2;
    ev.witness.u2_partner = u2 >= 0 ? part.partner[u2] : -1;
    ev.u2_defined = u2 >= 0;
    if (cfg_.sink) {
      if (u2 >= 0) {
        ev.branch_after.push_back(eval_deleted({{u1}, {u2}}));
        ev.branch_after.push_back(eval_deleted({{u1}, closed_neighborhood(u2)}));
        ev.branch_after.push_back(eval_deleted({closed_neighborhood(u1), {u2}}));
        ev.branch_after.push_back(eval_pair_branch_tail(
            {closed_neighborhood(u1), closed_neighborhood(u2)}, v, vp, x, x1, x2));
      } else {
        ev.branch_after.push_back(eval_deleted({{u1}}));
        ev.branch_after.push_back(
            eval_pair_branch_tail({closed_neighborhood(u1)}, v, vp, x, x1, x2));
      }
    }
    emit(ev);
    return nested_b1(q, depth, u1, u2);
  }

  std::vector<VertexId> r13_final(int q, int depth, VertexId v, const CoverPartition& part) {
    count_rule(13);
    TraceEvent ev = make_event(13, q, depth, true, 2);
    ev.witness.v = v;
    ev.witness.v_partner = part.vclass[v] == VClass::pair ? part.partner[v] : -1;
    if (cfg_.sink) {
      ev.branch_after.push_back(eval_deleted({{v}}));
      ev.branch_after.push_back(eval_deleted({closed_neighborhood(v)}));
    }
    emit(ev);
    return apply_b1(q, depth, v, 0);
  }

  Graph& g_;
  std::vector<Rational> w_;
  std::vector<char> in_U_;
  EngineConfig cfg_;
  SolveStats* stats_;
  long seq_ = 0;
};

}  // namespace detail

// Full pipeline: minimum-size cover, witness property, then the recursion.
inline std::pair<SolveOutcome, SolveStats> solve(Graph& g, const std::vector<Rational>& w,
                                                 const EngineConfig& cfg = {}) {
  require(g.max_degree() <= 3, errc::non_subcubic, "input has a vertex of degree > 3");
  for (VertexId v : g.alive_vertices())
    require(!w[v].is_negative(), errc::non_subcubic, "negative weight");

  SolveStats stats;
  std::vector<char> in_U(g.n_total(), 0);
  for (VertexId v : min_size_vc(g)) in_U[v] = 1;
  stats.t = static_cast<int>(std::count(in_U.begin(), in_U.end(), char(1)));

  auto [u_fixed, f, fstatus] = establish_f_property(g, std::move(in_U));
  stats.f_satisfied_at_root = fstatus.satisfied;
  if (cfg.strict_f && !fstatus.satisfied)
    fail(errc::f_property_violation, "witness mapping unsatisfied after repair");

  {
    CoverPartition p = partition_cover(g, u_fixed);
    stats.m1_root = measure_m1(p, cfg.alpha);
  }

  int journal_before = g.journal_depth();
  detail::Engine engine(g, w, u_fixed, cfg, &stats);
  SolveOutcome outcome;
  outcome.cover = engine.run();
  check(g.journal_depth() == journal_before, "solve left the graph journal unbalanced");

  for (VertexId v : g.alive_vertices()) {
    if (std::binary_search(outcome.cover.begin(), outcome.cover.end(), v)) continue;
    for (VertexId u : g.neighbors(v))
      check(std::binary_search(outcome.cover.begin(), outcome.cover.end(), u),
            "solve returned a non-cover");
  }
  outcome.weight = Rational(0);
  for (VertexId v : outcome.cover) outcome.weight += w[v];
  return {std::move(outcome), std::move(stats)};
}

}  // namespace wvc
