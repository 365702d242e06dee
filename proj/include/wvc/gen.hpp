#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wvc/graph.hpp"
#include "wvc/rational.hpp"

namespace wvc {

enum class GenModel {
  cubic_pairing,
  subcubic_erdos,
  cycle,
  path,
  triangle_gadget,
  k4_cluster,
  bipartite,
};

enum class WeightModel { unit, uniform_int, rational };

struct GenSpec {
  GenModel model = GenModel::subcubic_erdos;
  int n = 10;
  std::uint64_t seed = 1;
  WeightModel weights = WeightModel::unit;
  int max_weight = 100;  // W for uniform-int
};

namespace detail {

// mt19937_64 plus a multiply-high range reduction and Fisher-Yates shuffle:
// both are pinned here because the std distribution/shuffle algorithms are
// not specified bit-for-bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t raw() { return eng_(); }
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(raw()) * n) >> 64);
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace detail

inline const char* gen_model_name(GenModel m) {
  switch (m) {
    case GenModel::cubic_pairing: return "cubic-pairing";
    case GenModel::subcubic_erdos: return "subcubic-erdos";
    case GenModel::cycle: return "cycle";
    case GenModel::path: return "path";
    case GenModel::triangle_gadget: return "triangle-gadget";
    case GenModel::k4_cluster: return "k4-cluster";
    case GenModel::bipartite: return "bipartite";
  }
  return "?";
}

inline GenModel parse_gen_model(const std::string& s) {
  for (GenModel m : {GenModel::cubic_pairing, GenModel::subcubic_erdos, GenModel::cycle,
                     GenModel::path, GenModel::triangle_gadget, GenModel::k4_cluster,
                     GenModel::bipartite})
    if (s == gen_model_name(m)) return m;
  fail(errc::gen_failure, "unknown model: " + s);
}

inline std::pair<Graph, std::vector<Rational>> generate(const GenSpec& spec) {
  require(spec.n >= 1, errc::gen_failure, "n must be positive");
  detail::Rng rng(spec.seed);
  std::vector<std::pair<VertexId, VertexId>> edges;
  int n = spec.n;

  switch (spec.model) {
    case GenModel::cycle: {
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      if (n >= 3) edges.emplace_back(0, n - 1);
      break;
    }
    case GenModel::path: {
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    }
    case GenModel::cubic_pairing: {
      require(n >= 4 && n % 2 == 0, errc::gen_failure,
              "3-regular graphs need even n >= 4");
      bool ok = false;
      for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(3 * n);
        for (int v = 0; v < n; ++v)
          for (int k = 0; k < 3; ++k) stubs.push_back(v);
        rng.shuffle(stubs);
        std::vector<std::pair<VertexId, VertexId>> cand;
        std::vector<std::vector<char>> seen(n, std::vector<char>(n, 0));
        ok = true;
        for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
          int u = stubs[i], v = stubs[i + 1];
          if (u == v || seen[u][v]) {
            ok = false;
            break;
          }
          seen[u][v] = seen[v][u] = 1;
          cand.emplace_back(std::min(u, v), std::max(u, v));
        }
        if (ok) edges = std::move(cand);
      }
      require(ok, errc::gen_failure, "pairing retries exhausted");
      break;
    }
    case GenModel::subcubic_erdos: {
      std::vector<std::pair<VertexId, VertexId>> pairs;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      rng.shuffle(pairs);
      std::vector<int> deg(n, 0);
      long target = n + n / 4;
      for (auto [u, v] : pairs) {
        if (static_cast<long>(edges.size()) >= target) break;
        if (deg[u] < 3 && deg[v] < 3) {
          edges.emplace_back(u, v);
          ++deg[u];
          ++deg[v];
        }
      }
      break;
    }
    case GenModel::triangle_gadget: {
      // Chained 6-vertex gadgets: triangle a,b,c; pendant witness x on a; pair
      // p,p' both adjacent to x. Degree-2 connectors keep components large
      // while {a,b,c,p,p'} stays a good chunk of a designed cover with a
      // triangle component and a valid witness.
      int k = std::max(1, (n + 3) / 7);
      int base_connectors = 6 * k;
      n = 6 * k + std::max(0, k - 1);
      for (int i = 0; i < k; ++i) {
        int a = 6 * i, b = a + 1, c = a + 2, x = a + 3, p = a + 4, pp = a + 5;
        edges.emplace_back(a, b);
        edges.emplace_back(a, c);
        edges.emplace_back(b, c);
        edges.emplace_back(a, x);
        edges.emplace_back(x, p);
        edges.emplace_back(x, pp);
        edges.emplace_back(p, pp);
        if (i + 1 < k) {
          int z = base_connectors + i;
          edges.emplace_back(c, z);
          edges.emplace_back(z, 6 * (i + 1) + 1);
        }
      }
      break;
    }
    case GenModel::k4_cluster: {
      int k = std::max(1, n / 4);
      n = 4 * k;
      for (int i = 0; i < k; ++i)
        for (int a = 0; a < 4; ++a)
          for (int b = a + 1; b < 4; ++b) edges.emplace_back(4 * i + a, 4 * i + b);
      break;
    }
    case GenModel::bipartite: {
      int half = std::max(1, n / 2);
      std::vector<std::pair<VertexId, VertexId>> pairs;
      for (int a = 0; a < half; ++a)
        for (int b = half; b < n; ++b) pairs.emplace_back(a, b);
      rng.shuffle(pairs);
      std::vector<int> deg(n, 0);
      long target = n + n / 5;
      for (auto [u, v] : pairs) {
        if (static_cast<long>(edges.size()) >= target) break;
        if (deg[u] < 3 && deg[v] < 3) {
          edges.emplace_back(u, v);
          ++deg[u];
          ++deg[v];
        }
      }
      break;
    }
  }

  Graph g = Graph::build(n, edges);
  check(g.max_degree() <= 3, "generator emitted a vertex of degree > 3");

  std::vector<Rational> w(n, Rational(1));
  switch (spec.weights) {
    case WeightModel::unit:
      break;
    case WeightModel::uniform_int: {
      int cap = std::max(1, spec.max_weight);
      for (int v = 0; v < n; ++v)
        w[v] = Rational(1 + static_cast<long long>(rng.below(cap)));
      break;
    }
    case WeightModel::rational: {
      for (int v = 0; v < n; ++v) {
        long long num = 1 + static_cast<long long>(rng.below(49999));
        long long den = 1;
        for (std::uint64_t k = rng.below(5); k > 0; --k) den *= 10;
        w[v] = Rational(num, den);
      }
      break;
    }
  }
  return {std::move(g), std::move(w)};
}

}  // namespace wvc
