#pragma once

#include <array>
#include <utility>
#include <vector>

#include "wvc/graph.hpp"
#include "wvc/rational.hpp"

namespace wvc {

inline const Rational kDefaultAlpha{156, 1000};
inline const Rational kDefaultBeta{175, 1000};

enum class VClass : int8_t {
  outside = 0,   // not in U
  singleton = 1, // lone vertex of its G[U] component (VCC1)
  pair = 2,      // vertex of a complete size-2 component (VCC2)
  large = 3,     // any other U vertex (component size >= 3)
};

// Decomposition of G[U] per component size/completeness, plus per-vertex
// classification used by the potential map.
struct CoverPartition {
  std::vector<VertexId> cc1;                  // singleton components
  std::vector<std::array<VertexId, 2>> cc2;   // edge components, each sorted
  std::vector<std::array<VertexId, 3>> cc3;   // triangle components, each sorted
  std::vector<std::array<VertexId, 2>> ccs2;  // cc2 with no common outside neighbor
  std::vector<std::array<VertexId, 3>> ccs3;  // cc3 with no common outside neighbor
  std::vector<std::vector<VertexId>> larger;  // remaining components (size >= 3)

  std::vector<char> in_cover;     // by id
  std::vector<VClass> vclass;     // by id
  std::vector<VertexId> partner;  // pair partner for VCC2 members, else -1
  std::vector<char> in_ccs2;      // by id, for VCC2 members

  long n_vcc1 = 0;
  long n_vcc2 = 0;
  long n_vcc_ge2 = 0;  // |U| - |VCC1|

  bool good = true;  // every component of G[U] has size <= 2

  bool in_U(VertexId v) const { return in_cover[v] != 0; }
};

inline void validate_cover(const Graph& g, const std::vector<char>& in_U) {
  for (VertexId v : g.alive_vertices()) {
    if (in_U[v]) continue;
    for (VertexId u : g.neighbors(v))
      require(in_U[u] != 0, errc::not_a_vertex_cover,
              "edge (" + std::to_string(v) + "," + std::to_string(u) + ") uncovered");
  }
}

inline CoverPartition partition_cover(const Graph& g, const std::vector<char>& in_U) {
  validate_cover(g, in_U);
  CoverPartition p;
  p.in_cover = in_U;
  p.in_cover.resize(g.n_total(), 0);
  p.vclass.assign(g.n_total(), VClass::outside);
  p.partner.assign(g.n_total(), -1);
  p.in_ccs2.assign(g.n_total(), 0);

  std::vector<char> seen(g.n_total(), 0);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.n_total(); ++s) {
    if (!g.is_alive(s) || !in_U[s] || seen[s]) continue;
    std::vector<VertexId> comp;
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (VertexId u : g.neighbors(v))
        if (in_U[u] && !seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
    }
    std::sort(comp.begin(), comp.end());
    if (comp.size() == 1) {
      p.vclass[comp[0]] = VClass::singleton;
      p.cc1.push_back(comp[0]);
      ++p.n_vcc1;
    } else if (comp.size() == 2) {
      std::array<VertexId, 2> pr{comp[0], comp[1]};
      p.cc2.push_back(pr);
      for (int i = 0; i < 2; ++i) {
        p.vclass[pr[i]] = VClass::pair;
        p.partner[pr[i]] = pr[1 - i];
      }
      p.n_vcc2 += 2;
    } else if (comp.size() == 3 && g.adjacent(comp[0], comp[1]) &&
               g.adjacent(comp[0], comp[2]) && g.adjacent(comp[1], comp[2])) {
      p.cc3.push_back({comp[0], comp[1], comp[2]});
      for (VertexId v : comp) p.vclass[v] = VClass::large;
      p.good = false;
    } else {
      for (VertexId v : comp) p.vclass[v] = VClass::large;
      p.larger.push_back(std::move(comp));
      p.good = false;
    }
  }
  p.n_vcc_ge2 = 0;
  for (VertexId v : g.alive_vertices())
    if (in_U[v] && p.vclass[v] != VClass::singleton) ++p.n_vcc_ge2;

  auto has_common_outside = [&](std::span<const VertexId> comp) {
    for (VertexId x : g.neighbors(comp[0])) {
      if (in_U[x]) continue;
      bool all = true;
      for (size_t i = 1; i < comp.size() && all; ++i) all = g.adjacent(x, comp[i]);
      if (all) return true;
    }
    return false;
  };
  for (const auto& pr : p.cc2)
    if (!has_common_outside(pr)) {
      p.ccs2.push_back(pr);
      p.in_ccs2[pr[0]] = p.in_ccs2[pr[1]] = 1;
    }
  for (const auto& tr : p.cc3)
    if (!has_common_outside(tr)) p.ccs3.push_back(tr);
  return p;
}

inline bool is_good_cover(const Graph& g, const std::vector<char>& in_U) {
  return partition_cover(g, in_U).good;
}

enum class OutsideClass { bad, semi_bad, good };

// Classification of an outside vertex by its adjacencies into VCC1/VCC2;
// defined for good covers only, tested in the definitional order.
inline OutsideClass classify_outside(const Graph& g, const CoverPartition& p, VertexId x) {
  check(!p.in_U(x), "classify_outside expects a vertex outside U");
  int n1 = 0, n2 = 0;
  bool spans_pair = false;
  for (VertexId u : g.neighbors(x)) {
    if (p.vclass[u] == VClass::singleton) ++n1;
    if (p.vclass[u] == VClass::pair) {
      ++n2;
      if (g.adjacent(x, p.partner[u])) spans_pair = true;
    }
  }
  if (n1 >= 1 && (n2 == 1 || spans_pair)) return OutsideClass::bad;
  if (n1 == 1 && n2 == 2) return OutsideClass::semi_bad;
  return OutsideClass::good;
}

// Potential of a pair vertex: for VCCS2 members max(0, 1 - b1 - b2/2) over the
// vertex's own bad/semi-bad neighbors; for a pair with a common outside
// neighbor both endpoints get max(0, 1 - b1/2 - b2/4) counted over N({v,v'}).
inline Rational potential(const Graph& g, const CoverPartition& p, VertexId v) {
  check(p.vclass[v] == VClass::pair, "potential is defined on VCC2 members");
  int b1 = 0, b2 = 0;
  auto count = [&](VertexId y) {
    if (p.in_U(y)) return;
    OutsideClass c = classify_outside(g, p, y);
    if (c == OutsideClass::bad) ++b1;
    if (c == OutsideClass::semi_bad) ++b2;
  };
  if (p.in_ccs2[v]) {
    for (VertexId y : g.neighbors(v)) count(y);
    Rational val = Rational(1) - Rational(b1) - Rational(b2, 2);
    return val < Rational(0) ? Rational(0) : val;
  }
  VertexId vp = p.partner[v];
  std::vector<VertexId> nbh;
  for (VertexId y : g.neighbors(v))
    if (y != vp) nbh.push_back(y);
  for (VertexId y : g.neighbors(vp))
    if (y != v) nbh.push_back(y);
  std::sort(nbh.begin(), nbh.end());
  nbh.erase(std::unique(nbh.begin(), nbh.end()), nbh.end());
  for (VertexId y : nbh) count(y);
  Rational val = Rational(1) - Rational(b1, 2) - Rational(b2, 4);
  return val < Rational(0) ? Rational(0) : val;
}

struct Measures {
  Rational m1;       // |VCC>=2| + alpha*|VCC1|, defined for any cover
  Rational m2;       // (1+alpha*beta)*|VCC2|, good covers
  long m = 0;        // |VCC2|, good covers
  Rational M;        // sum of potentials over VCC2, good covers
  bool good = false; // whether m2/m/M are meaningful
  long n_vcc1 = 0;
  Rational alpha, beta;
};

inline Rational measure_m1(const CoverPartition& p, const Rational& alpha = kDefaultAlpha) {
  return Rational(p.n_vcc_ge2) + alpha * Rational(p.n_vcc1);
}

inline Measures measures(const Graph& g, const CoverPartition& p,
                         const Rational& alpha = kDefaultAlpha,
                         const Rational& beta = kDefaultBeta) {
  Measures ms;
  ms.alpha = alpha;
  ms.beta = beta;
  ms.n_vcc1 = p.n_vcc1;
  ms.m1 = measure_m1(p, alpha);
  ms.good = p.good;
  if (!p.good) return ms;
  ms.m = p.n_vcc2;
  ms.m2 = (Rational(1) + alpha * beta) * Rational(p.n_vcc2);
  ms.M = Rational(0);
  for (const auto& pr : p.cc2)
    for (VertexId v : pr) ms.M += potential(g, p, v);
  return ms;
}

// Slack of the potential lower bound M >= |VCC2| - 3|VCC1| on a good cover.
inline std::pair<bool, Rational> lemma2_holds(const Graph& g, const std::vector<char>& in_U) {
  CoverPartition p = partition_cover(g, in_U);
  check(p.good, "lemma2_holds expects a good cover");
  Measures ms = measures(g, p);
  Rational slack = ms.M - (Rational(p.n_vcc2) - Rational(3) * Rational(p.n_vcc1));
  return {!slack.is_negative(), slack};
}

}  // namespace wvc
