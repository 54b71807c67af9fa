#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "partition.hpp"

namespace ergodic {

inline constexpr std::size_t kExactCutLimit = 20;

enum class PriceMethod { Exact, Greedy, Local };

inline const char* method_name(PriceMethod m) {
  switch (m) {
    case PriceMethod::Exact: return "exact";
    case PriceMethod::Greedy: return "greedy";
    case PriceMethod::Local: return "local";
  }
  return "?";
}

struct CutReport {
  VertexSet vertices;                               // vertex cuts
  std::vector<std::pair<Vertex, Vertex>> edges;     // edge cuts
  std::size_t largest_component = 0;
  double largest_rho_max = 0;  // ρ^max of the largest remaining component; its size when no cocycle is given
  double mass = 0;
  std::size_t K = 0;
  PriceMethod method = PriceMethod::Exact;
  bool exact = false;
};

inline std::vector<VertexSet> components_without(const WeightedGraph& g, std::span<const Vertex> cut) {
  VertexSet rest;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!std::binary_search(cut.begin(), cut.end(), v)) rest.push_back(v);
  return induced_components(g, rest);
}

inline bool is_K_finitizing_vertex_cut(const WeightedGraph& g, std::span<const Vertex> cut, std::size_t K) {
  for (const auto& c : components_without(g, cut))
    if (c.size() > K) return false;
  return true;
}

// Components after deleting edges (given as sorted (min,max) pairs).
inline std::vector<VertexSet> components_without_edges(const WeightedGraph& g,
                                                       std::span<const std::pair<Vertex, Vertex>> cut) {
  DisjointSets ds(g.vertex_count());
  for (auto e : g.edges())
    if (!std::binary_search(cut.begin(), cut.end(), e)) ds.unite(e.first, e.second);
  std::vector<VertexSet> groups(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) groups[ds.find(v)].push_back(v);
  std::vector<VertexSet> out;
  for (auto& s : groups)
    if (!s.empty()) out.push_back(std::move(s));
  return out;
}

inline bool is_K_finitizing_edge_cut(const WeightedGraph& g, std::span<const std::pair<Vertex, Vertex>> cut,
                                     std::size_t K) {
  for (const auto& c : components_without_edges(g, cut))
    if (c.size() > K) return false;
  return true;
}

namespace detail {

inline void fill_report(CutReport& r, const std::vector<VertexSet>& comps, const Cocycle* rho,
                        const WeightedGraph& g) {
  for (const auto& c : comps)
    if (c.size() > r.largest_component) {
      r.largest_component = c.size();
      r.largest_rho_max = rho ? rho_max_ratio(g, *rho, c) : static_cast<double>(c.size());
    }
}

// Minimum-mass K-finitizing vertex cut of one component by branch and bound.
inline VertexSet exact_vertex_cut(const WeightedGraph& g, const VertexSet& comp, std::span<const double> mass,
                                  std::size_t K) {
  std::size_t k = comp.size();
  std::vector<Vertex> order(comp.begin(), comp.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return g.neighbors(a).size() > g.neighbors(b).size(); });
  std::vector<int> pos(g.vertex_count(), -1);
  for (std::size_t i = 0; i < k; ++i) pos[order[i]] = static_cast<int>(i);
  std::vector<std::uint32_t> adj(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (Vertex u : g.neighbors(order[i])) adj[i] |= 1u << pos[u];

  double best = INFINITY;
  std::uint32_t best_cut = 0;
  auto comp_size = [&](std::uint32_t kept, std::size_t start) {
    std::uint32_t seen = 1u << start, grow = seen;
    while (grow) {
      std::uint32_t next = 0;
      for (std::uint32_t b = grow; b; b &= b - 1) next |= adj[std::countr_zero(b)];
      next &= kept & ~seen;
      seen |= next;
      grow = next;
    }
    return static_cast<std::size_t>(std::popcount(seen));
  };
  std::function<void(std::size_t, std::uint32_t, std::uint32_t, double)> rec =
      [&](std::size_t i, std::uint32_t kept, std::uint32_t cut, double cost) {
        if (cost >= best) return;
        if (i == k) {
          best = cost;
          best_cut = cut;
          return;
        }
        std::uint32_t with = kept | (1u << i);
        if (comp_size(with, i) <= K) rec(i + 1, with, cut, cost);
        rec(i + 1, kept, cut | (1u << i), cost + mass[order[i]]);
      };
  rec(0, 0, 0, 0.0);
  VertexSet out;
  for (std::uint32_t b = best_cut; b; b &= b - 1) out.push_back(order[std::countr_zero(b)]);
  return make_set(std::move(out));
}

inline VertexSet greedy_vertex_cut(const WeightedGraph& g, std::span<const double> mass, std::size_t K) {
  VertexSet cut;
  while (true) {
    auto comps = components_without(g, cut);
    const VertexSet* big = nullptr;
    for (const auto& c : comps)
      if (c.size() > K && (!big || c.size() > big->size())) big = &c;
    if (!big) return cut;
    Vertex pick = big->front();
    std::size_t pick_largest = SIZE_MAX;
    for (Vertex v : *big) {
      VertexSet rest;
      for (Vertex u : *big)
        if (u != v) rest.push_back(u);
      std::size_t largest = 0;
      for (const auto& c : induced_components(g, rest)) largest = std::max(largest, c.size());
      if (largest < pick_largest || (largest == pick_largest && mass[v] < mass[pick])) pick = v, pick_largest = largest;
    }
    cut.insert(std::lower_bound(cut.begin(), cut.end(), pick), pick);
  }
}

// Drops redundant cut vertices and tries cheaper one-for-one swaps until nothing improves.
inline VertexSet local_vertex_cut(const WeightedGraph& g, std::span<const double> mass, std::size_t K) {
  VertexSet cut = greedy_vertex_cut(g, mass, K);
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<Vertex> by_mass(cut.begin(), cut.end());
    std::stable_sort(by_mass.begin(), by_mass.end(), [&](Vertex a, Vertex b) { return mass[a] > mass[b]; });
    for (Vertex u : by_mass) {
      VertexSet trial = cut;
      std::erase(trial, u);
      if (is_K_finitizing_vertex_cut(g, trial, K)) {
        cut = trial;
        improved = true;
        break;
      }
      for (Vertex v = 0; v < g.vertex_count() && !improved; ++v) {
        if (mass[v] >= mass[u] || std::binary_search(cut.begin(), cut.end(), v)) continue;
        VertexSet swap = trial;
        swap.insert(std::lower_bound(swap.begin(), swap.end(), v), v);
        if (is_K_finitizing_vertex_cut(g, swap, K)) {
          cut = swap;
          improved = true;
        }
      }
      if (improved) break;
    }
  }
  return cut;
}

using Edge = std::pair<Vertex, Vertex>;

inline std::vector<Edge> exact_edge_cut(const WeightedGraph& g, const VertexSet& comp, std::span<const double> nu,
                                        std::size_t K) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.edges().size(); ++i)
    if (std::binary_search(comp.begin(), comp.end(), g.edges()[i].first)) idx.push_back(i);
  std::vector<int> local(g.vertex_count(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = static_cast<int>(i);
  double best = INFINITY;
  std::vector<char> best_cut, cur(idx.size(), 0);
  std::function<void(std::size_t, std::vector<int>, std::vector<int>, double)> rec =
      [&](std::size_t i, std::vector<int> parent, std::vector<int> size, double cost) {
        if (cost >= best) return;
        if (i == idx.size()) {
          best = cost;
          best_cut = cur;
          return;
        }
        auto find = [&](int x) {
          while (parent[x] != x) x = parent[x];
          return x;
        };
        auto [a, b] = g.edges()[idx[i]];
        int ra = find(local[a]), rb = find(local[b]);
        if (ra == rb || static_cast<std::size_t>(size[ra] + size[rb]) <= K) {
          auto p2 = parent;
          auto s2 = size;
          if (ra != rb) {
            if (s2[ra] < s2[rb]) std::swap(ra, rb);
            p2[rb] = ra;
            s2[ra] += s2[rb];
          }
          rec(i + 1, std::move(p2), std::move(s2), cost);
        }
        cur[i] = 1;
        rec(i + 1, std::move(parent), std::move(size), cost + nu[idx[i]]);
        cur[i] = 0;
      };
  std::vector<int> parent(comp.size()), size(comp.size(), 1);
  for (std::size_t i = 0; i < comp.size(); ++i) parent[i] = static_cast<int>(i);
  rec(0, parent, size, 0.0);
  std::vector<Edge> out;
  for (std::size_t i = 0; i < idx.size(); ++i)
    if (best_cut[i]) out.push_back(g.edges()[idx[i]]);
  return out;
}

inline std::vector<Edge> greedy_edge_cut(const WeightedGraph& g, std::span<const double> nu, std::size_t K) {
  std::vector<Edge> cut;
  while (true) {
    auto comps = components_without_edges(g, cut);
    const VertexSet* big = nullptr;
    for (const auto& c : comps)
      if (c.size() > K && (!big || c.size() > big->size())) big = &c;
    if (!big) return cut;
    std::size_t pick = SIZE_MAX, pick_largest = SIZE_MAX;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      Edge e = g.edges()[i];
      if (!std::binary_search(big->begin(), big->end(), e.first) || std::binary_search(cut.begin(), cut.end(), e))
        continue;
      auto trial = cut;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), e), e);
      std::size_t largest = 0;
      for (const auto& c : components_without_edges(g, trial))
        if (std::binary_search(big->begin(), big->end(), c.front())) largest = std::max(largest, c.size());
      if (largest < pick_largest || (largest == pick_largest && nu[i] < nu[pick])) pick = i, pick_largest = largest;
    }
    Edge e = g.edges()[pick];
    cut.insert(std::lower_bound(cut.begin(), cut.end(), e), e);
  }
}

inline std::vector<Edge> local_edge_cut(const WeightedGraph& g, std::span<const double> nu, std::size_t K) {
  auto cut = greedy_edge_cut(g, nu, K);
  auto index = [&](Edge e) { return std::lower_bound(g.edges().begin(), g.edges().end(), e) - g.edges().begin(); };
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i < cut.size() && !improved; ++i) {
      auto trial = cut;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(i));
      if (is_K_finitizing_edge_cut(g, trial, K)) {
        cut = trial;
        improved = true;
        break;
      }
      for (std::size_t j = 0; j < g.edges().size() && !improved; ++j) {
        Edge e = g.edges()[j];
        if (nu[j] >= nu[index(cut[i])] || std::binary_search(trial.begin(), trial.end(), e)) continue;
        auto swap = trial;
        swap.insert(std::lower_bound(swap.begin(), swap.end(), e), e);
        if (is_K_finitizing_edge_cut(g, swap, K)) cut = swap, improved = true;
      }
    }
  }
  return cut;
}

}  // namespace detail

// Cheapest (or heuristic) vertex set whose removal leaves components of at most K vertices.
inline CutReport vertex_price(const WeightedGraph& g, std::span<const double> mass, std::size_t K, PriceMethod method,
                              const Cocycle* rho = nullptr) {
  CutReport r;
  r.K = K;
  r.method = method;
  r.exact = method == PriceMethod::Exact;
  if (method == PriceMethod::Exact) {
    for (std::uint32_t c = 0; c < g.component_count(); ++c) {
      const auto& mem = g.component_members(c);
      if (mem.size() <= K) continue;
      if (mem.size() > kExactCutLimit)
        throw Error(ErrorKind::TooLargeForExact, "component of " + std::to_string(mem.size()) + " vertices");
      auto part = detail::exact_vertex_cut(g, mem, mass, K);
      r.vertices.insert(r.vertices.end(), part.begin(), part.end());
    }
    r.vertices = make_set(std::move(r.vertices));
  } else {
    r.vertices = method == PriceMethod::Greedy ? detail::greedy_vertex_cut(g, mass, K) : detail::local_vertex_cut(g, mass, K);
  }
  for (Vertex v : r.vertices) r.mass += mass[v];
  detail::fill_report(r, components_without(g, r.vertices), rho, g);
  return r;
}

inline std::vector<double> uniform_edge_measure(const WeightedGraph& g) {
  return std::vector<double>(g.edge_count(), g.edge_count() ? 1.0 / static_cast<double>(g.edge_count()) : 0.0);
}

// ν is indexed like g.edges().
inline CutReport edge_price(const WeightedGraph& g, std::span<const double> nu, std::size_t K, PriceMethod method,
                            const Cocycle* rho = nullptr) {
  CutReport r;
  r.K = K;
  r.method = method;
  r.exact = method == PriceMethod::Exact;
  if (method == PriceMethod::Exact) {
    for (std::uint32_t c = 0; c < g.component_count(); ++c) {
      const auto& mem = g.component_members(c);
      if (mem.size() <= K) continue;
      if (mem.size() > kExactCutLimit)
        throw Error(ErrorKind::TooLargeForExact, "component of " + std::to_string(mem.size()) + " vertices");
      auto part = detail::exact_edge_cut(g, mem, nu, K);
      r.edges.insert(r.edges.end(), part.begin(), part.end());
    }
    std::sort(r.edges.begin(), r.edges.end());
  } else {
    r.edges = method == PriceMethod::Greedy ? detail::greedy_edge_cut(g, nu, K) : detail::local_edge_cut(g, nu, K);
  }
  for (auto e : r.edges) r.mass += nu[std::lower_bound(g.edges().begin(), g.edges().end(), e) - g.edges().begin()];
  detail::fill_report(r, components_without_edges(g, r.edges), rho, g);
  return r;
}

struct VanishingSequence {
  std::vector<VertexSet> tails;  // B_n = union of A_k for k > n
  bool decreasing = true;
  bool vanishes = true;          // last tail empty
  bool masses_summable = true;   // μ(A_k) < 2^-k for every k
};

inline VanishingSequence vanishing_sequence(std::span<const VertexSet> sets, std::span<const double> mu) {
  VanishingSequence out;
  std::size_t m = sets.size();
  out.tails.assign(m, {});
  VertexSet acc;
  for (std::size_t n = m; n-- > 0;) {
    out.tails[n] = acc;
    acc = set_union(acc, sets[n]);
  }
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0;
    for (Vertex v : sets[k]) s += mu[v];
    if (!(s < std::ldexp(1.0, -static_cast<int>(k)))) out.masses_summable = false;
    if (k + 1 < m && !is_subset(out.tails[k + 1], out.tails[k])) out.decreasing = false;
  }
  out.vanishes = m == 0 || out.tails.back().empty();
  return out;
}

struct LimsupMass {
  double mass_of_limsup = 0;  // μ(limsup D_n)
  double limsup_of_mass = 0;  // limsup μ(D_n)
  bool holds() const { return mass_of_limsup >= limsup_of_mass - 1e-15; }
};

// The last `period` sets repeat forever.
inline LimsupMass limsup_mass(std::span<const VertexSet> sets, std::span<const double> mu, std::size_t period = 1) {
  LimsupMass out;
  if (sets.empty()) return out;
  period = std::clamp<std::size_t>(period, 1, sets.size());
  VertexSet u;
  for (std::size_t i = sets.size() - period; i < sets.size(); ++i) {
    double s = 0;
    for (Vertex v : sets[i]) s += mu[v];
    out.limsup_of_mass = std::max(out.limsup_of_mass, s);
    u = set_union(u, sets[i]);
  }
  for (Vertex v : u) out.mass_of_limsup += mu[v];
  return out;
}

}  // namespace ergodic
