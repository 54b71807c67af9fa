#pragma once

#include <cmath>
#include <functional>
#include <queue>
#include <span>
#include <vector>

#include "cocycle.hpp"

namespace ergodic {

struct Block {
  VertexSet vertices;
  Vertex dominus;
  double alpha;
  bool touches_frontier = false;
};

// Component of x in the subgraph on {v : ρ(v) ≤ α ρ(x)}.
inline Block block(const WeightedGraph& g, const Cocycle& rho, Vertex x, double alpha,
                   std::span<const char> frontier = {}) {
  if (!(alpha >= 1)) throw Error(ErrorKind::BadMagnification, "alpha " + std::to_string(alpha) + " < 1");
  double cap = std::log(alpha);
  double lx = rho.log_weight(x);
  std::vector<Vertex> out{x}, stack{x};
  std::vector<char> seen(g.vertex_count(), 0);
  seen[x] = 1;
  while (!stack.empty()) {
    Vertex v = stack.back();
    stack.pop_back();
    for (Vertex u : g.neighbors(v))
      if (!seen[u] && rho.log_weight(u) - lx <= cap) {
        seen[u] = 1;
        out.push_back(u);
        stack.push_back(u);
      }
  }
  Block b{make_set(std::move(out)), x, alpha, false};
  if (!frontier.empty())
    for (Vertex v : b.vertices) b.touches_frontier |= frontier[v] != 0;
  return b;
}

enum class BlockRelation { Disjoint, Equal, FirstInsideSecond, SecondInsideFirst };

inline BlockRelation nested_or_disjoint_check(const Block& a, const Block& b) {
  bool meet = sets_intersect(a.vertices, b.vertices);
  if (!meet) return BlockRelation::Disjoint;
  bool ab = is_subset(a.vertices, b.vertices), ba = is_subset(b.vertices, a.vertices);
  if (ab && ba) return BlockRelation::Equal;
  if (ab) return BlockRelation::FirstInsideSecond;
  if (ba) return BlockRelation::SecondInsideFirst;
  throw Error(ErrorKind::InvariantBreach, "blocks of " + std::to_string(a.dominus) + " and " +
                                              std::to_string(b.dominus) + " cross");
}

// Smallest-id vertex of maximal ρ.
inline Vertex max_rho_vertex(const Cocycle& rho, std::span<const Vertex> set) {
  Vertex best = set.front();
  for (Vertex v : set)
    if (rho.log_weight(v) > rho.log_weight(best) || (rho.log_weight(v) == rho.log_weight(best) && v < best)) best = v;
  return best;
}

// Blk(y, 1) for the ρ-minimal boundary vertex y.
inline Block next_block(const WeightedGraph& g, const Cocycle& rho, const Block& b) {
  VertexSet bd = outer_boundary(g, b.vertices);
  if (bd.empty()) throw Error(ErrorKind::NoNextBlock, "block of " + std::to_string(b.dominus) + " fills its component");
  Vertex y = rho_order(rho, bd).front();
  return block(g, rho, y, 1.0);
}

inline Vertex dominus_step(const WeightedGraph& g, const Cocycle& rho, Vertex x) {
  Block b = block(g, rho, x, 1.0);
  if (b.vertices.size() == g.component_members(g.component(x)).size()) return max_rho_vertex(rho, b.vertices);
  return max_rho_vertex(rho, next_block(g, rho, b).vertices);
}

struct OrbitMergeReport {
  bool merged = true;
  std::vector<Vertex> terminal;  // per component
  std::size_t max_steps = 0;
};

// Iterates the dominus step from every vertex; all orbits in a component must end at one fixed point.
inline OrbitMergeReport orbit_merge_test(const WeightedGraph& g, const Cocycle& rho) {
  OrbitMergeReport r;
  std::vector<Vertex> step(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) step[v] = dominus_step(g, rho, v);
  for (std::uint32_t c = 0; c < g.component_count(); ++c) {
    const auto& mem = g.component_members(c);
    Vertex top = max_rho_vertex(rho, mem);
    r.terminal.push_back(top);
    if (step[top] != top) r.merged = false;
    for (Vertex v : mem) {
      Vertex x = v;
      std::size_t k = 0;
      while (x != top && k <= mem.size()) x = step[x], ++k;
      if (x != top) r.merged = false;
      r.max_steps = std::max(r.max_steps, k);
    }
  }
  return r;
}

// {y : x ∈ Blk(y, 1)}: y qualifies when some x-y path never exceeds ρ(y).
inline VertexSet cone(const WeightedGraph& g, const Cocycle& rho, Vertex x) {
  std::vector<double> best(g.vertex_count(), INFINITY);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  best[x] = rho.log_weight(x);
  pq.push({best[x], x});
  while (!pq.empty()) {
    auto [b, v] = pq.top();
    pq.pop();
    if (b > best[v]) continue;
    for (Vertex u : g.neighbors(v)) {
      double nb = std::max(b, rho.log_weight(u));
      if (nb < best[u]) best[u] = nb, pq.push({nb, u});
    }
  }
  VertexSet out;
  for (Vertex y : g.component_members(g.component(x)))
    if (best[y] <= rho.log_weight(y)) out.push_back(y);
  return out;
}

// Same set by testing x ∈ Blk(y, 1) for every y in the component.
inline VertexSet cone_dual_scan(const WeightedGraph& g, const Cocycle& rho, Vertex x) {
  VertexSet out;
  for (Vertex y : g.component_members(g.component(x))) {
    if (rho.log_weight(y) < rho.log_weight(x)) continue;
    Block b = block(g, rho, y, 1.0);
    if (std::binary_search(b.vertices.begin(), b.vertices.end(), x)) out.push_back(y);
  }
  return out;
}

}  // namespace ergodic
