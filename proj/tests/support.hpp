#pragma once

// Random instances and brute-force oracles shared by the unit tests and the acceptance run.
// The oracles work from plain adjacency bitmasks and exp(log-weight) sums, never from the
// library's own helpers.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "ergodic/ergodic.hpp"

namespace oracle {

using ergodic::Vertex;
using ergodic::VertexSet;
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
inline std::size_t pick(Rng& rng, std::size_t a, std::size_t b) {
  return std::uniform_int_distribution<std::size_t>(a, b)(rng);
}

// Random spanning tree plus `extra` random chords.
inline std::vector<std::pair<Vertex, Vertex>> random_connected_edges(Rng& rng, std::size_t n, std::size_t extra) {
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<std::vector<char>> has(n, std::vector<char>(n, 0));
  auto add = [&](Vertex a, Vertex b) {
    if (a == b || has[a][b]) return;
    has[a][b] = has[b][a] = 1;
    e.emplace_back(std::min(a, b), std::max(a, b));
  };
  for (Vertex v = 1; v < n; ++v) add(v, static_cast<Vertex>(pick(rng, 0, v - 1)));
  for (std::size_t i = 0; i < extra && n > 1; ++i)
    add(static_cast<Vertex>(pick(rng, 0, n - 1)), static_cast<Vertex>(pick(rng, 0, n - 1)));
  return e;
}

inline std::vector<double> random_values(Rng& rng, std::size_t n, double a, double b) {
  std::vector<double> x(n);
  for (double& v : x) v = uniform(rng, a, b);
  return x;
}

// Connected set of the requested size grown breadth-first in random order from `start`.
inline VertexSet random_connected_set(Rng& rng, const ergodic::WeightedGraph& g, Vertex start, std::size_t size,
                                      std::span<const Vertex> within = {}) {
  std::vector<char> allowed(g.vertex_count(), within.empty() ? 1 : 0);
  for (Vertex v : within) allowed[v] = 1;
  std::vector<char> in(g.vertex_count(), 0);
  VertexSet out{start};
  in[start] = 1;
  std::vector<Vertex> frontier;
  auto push = [&](Vertex v) {
    for (Vertex u : g.neighbors(v))
      if (allowed[u] && !in[u] && std::find(frontier.begin(), frontier.end(), u) == frontier.end())
        frontier.push_back(u);
  };
  push(start);
  while (out.size() < size && !frontier.empty()) {
    std::size_t i = pick(rng, 0, frontier.size() - 1);
    Vertex v = frontier[i];
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(i));
    in[v] = 1;
    out.push_back(v);
    push(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Small graph as adjacency bitmasks.
struct MaskGraph {
  std::size_t n = 0;
  std::vector<std::uint32_t> adj;

  explicit MaskGraph(const ergodic::WeightedGraph& g) : n(g.vertex_count()), adj(n, 0) {
    for (auto [a, b] : g.edges()) {
      adj[a] |= 1u << b;
      adj[b] |= 1u << a;
    }
  }
  bool connected(std::uint32_t mask) const {
    if (!mask) return false;
    std::uint32_t seen = mask & (0u - mask);
    for (bool grew = true; grew;) {
      std::uint32_t nxt = seen;
      for (std::size_t v = 0; v < n; ++v)
        if (seen >> v & 1) nxt |= adj[v] & mask;
      grew = nxt != seen;
      seen = nxt;
    }
    return seen == mask;
  }
};

inline std::uint32_t mask_of(std::span<const Vertex> s) {
  std::uint32_t m = 0;
  for (Vertex v : s) m |= 1u << v;
  return m;
}

inline VertexSet set_of(std::uint32_t m) {
  VertexSet s;
  for (Vertex v = 0; m; ++v, m >>= 1)
    if (m & 1) s.push_back(v);
  return s;
}

// Direct ρ-sums of a masked set, scaled by exp(-ref).
struct MaskSums {
  double mass = 0, fmass = 0, max_w = 0;
};

inline MaskSums sums(std::uint32_t m, std::span<const double> lw, std::span<const double> f, double ref) {
  MaskSums s;
  for (Vertex v = 0; m; ++v, m >>= 1)
    if (m & 1) {
      double w = std::exp(lw[v] - ref);
      s.mass += w;
      s.fmass += f[v] * w;
      s.max_w = std::max(s.max_w, w);
    }
  return s;
}

// Family predicate evaluated from scratch: |average| < lambda and mass / max >= L.
struct CentralOracle {
  double lambda, L;
  bool operator()(std::uint32_t m, std::span<const double> lw, std::span<const double> f) const {
    auto s = sums(m, lw, f, *std::max_element(lw.begin(), lw.end()));
    return std::abs(s.fmass / s.mass) < lambda && s.mass / s.max_w >= L;
  }
};

struct AnyOracle {
  bool operator()(std::uint32_t, std::span<const double>, std::span<const double>) const { return true; }
};

inline std::vector<std::uint32_t> cell_masks(const ergodic::Prepartition& P) {
  std::vector<std::uint32_t> out;
  for (const auto& c : P.cells()) out.push_back(mask_of(c));
  return out;
}

inline bool invariant(std::uint32_t m, std::span<const std::uint32_t> cells) {
  for (auto c : cells)
    if ((m & c) && (m & c) != c) return false;
  return true;
}

// Every connected E(P)-invariant member A with ρ(A \ dom) >= p ρ(A ∩ dom) and fresh mass > 0.
template <class Family>
std::vector<std::uint32_t> all_packs(const MaskGraph& mg, const ergodic::Prepartition& P, double p,
                                     std::span<const double> lw, std::span<const double> f, const Family& fam) {
  auto cells = cell_masks(P);
  std::uint32_t dom = 0;
  for (auto c : cells) dom |= c;
  double ref = *std::max_element(lw.begin(), lw.end());
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 1; m < (1u << mg.n); ++m) {
    if (!(m & ~dom) || !invariant(m, cells) || !mg.connected(m) || !fam(m, lw, f)) continue;
    double fresh = sums(m & ~dom, lw, f, ref).mass, old = sums(m & dom, lw, f, ref).mass;
    if (fresh >= p * old) out.push_back(m);
  }
  return out;
}

// Strict supersets of a cell that are connected, E(P)-invariant, meet no other cell and lie in the family.
template <class Family>
std::vector<std::uint32_t> injective_supersets(const MaskGraph& mg, const ergodic::Prepartition& P,
                                               std::span<const double> lw, std::span<const double> f,
                                               const Family& fam) {
  auto cells = cell_masks(P);
  std::uint32_t dom = 0;
  for (auto c : cells) dom |= c;
  std::vector<std::uint32_t> out;
  for (auto c : cells) {
    std::uint32_t others = dom & ~c;
    for (std::uint32_t m = 1; m < (1u << mg.n); ++m)
      if ((m & c) == c && m != c && !(m & others) && mg.connected(m) && fam(m, lw, f)) out.push_back(m);
  }
  return out;
}

// Connected graphs on n vertices up to isomorphism, as sorted edge lists.
class GraphCatalogue {
 public:
  explicit GraphCatalogue(std::size_t max_n) {
    by_size_.resize(max_n + 1);
    if (max_n >= 1) by_size_[1].push_back(0);
    for (std::size_t n = 2; n <= max_n; ++n) {
      std::vector<std::uint64_t> seen;
      std::vector<std::vector<std::size_t>> perms = permutations(n);
      for (std::uint64_t code : by_size_[n - 1])
        for (std::uint32_t nb = 1; nb < (1u << (n - 1)); ++nb) {
          auto adj = decode(code, n - 1);
          adj.resize(n, 0);
          for (std::size_t v = 0; v + 1 < n; ++v)
            if (nb >> v & 1) adj[v] |= 1u << (n - 1), adj[n - 1] |= 1u << v;
          seen.push_back(canonical(adj, perms));
        }
      std::sort(seen.begin(), seen.end());
      seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
      by_size_[n] = std::move(seen);
    }
  }

  const std::vector<std::uint64_t>& codes(std::size_t n) const { return by_size_[n]; }

  static std::vector<std::pair<Vertex, Vertex>> edges(std::uint64_t code, std::size_t n) {
    std::vector<std::pair<Vertex, Vertex>> e;
    std::size_t bit = 0;
    for (Vertex a = 0; a < n; ++a)
      for (Vertex b = a + 1; b < n; ++b, ++bit)
        if (code >> bit & 1) e.emplace_back(a, b);
    return e;
  }

 private:
  static std::vector<std::uint32_t> decode(std::uint64_t code, std::size_t n) {
    std::vector<std::uint32_t> adj(n, 0);
    for (auto [a, b] : edges(code, n)) adj[a] |= 1u << b, adj[b] |= 1u << a;
    return adj;
  }

  static std::vector<std::vector<std::size_t>> permutations(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> all;
    do all.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return all;
  }

  // Largest upper-triangle code over all relabellings.
  static std::uint64_t canonical(const std::vector<std::uint32_t>& adj, const std::vector<std::vector<std::size_t>>& perms) {
    std::size_t n = adj.size();
    std::uint64_t best = 0;
    for (const auto& p : perms) {
      std::uint64_t code = 0;
      std::size_t bit = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b, ++bit)
          if (adj[p[a]] >> p[b] & 1) code |= std::uint64_t{1} << bit;
      best = std::max(best, code);
    }
    return best;
  }

  std::vector<std::vector<std::uint64_t>> by_size_;
};

}  // namespace oracle
