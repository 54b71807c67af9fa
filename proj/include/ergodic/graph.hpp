#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace ergodic {

using Vertex = std::uint32_t;
// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

inline VertexSet make_set(std::vector<Vertex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

inline VertexSet set_union(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(std::span<const Vertex> a, std::span<const Vertex> b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool sets_intersect(std::span<const Vertex> a, std::span<const Vertex> b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i == *j) return true;
    if (*i < *j) ++i; else ++j;
  }
  return false;
}

inline bool is_subset(std::span<const Vertex> a, std::span<const Vertex> b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// Undirected simple graph with bounded degree. Components are computed once.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Vertex> neighbors(Vertex v) const { return adj_[v]; }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }
  std::size_t max_degree() const { return max_degree_; }

  std::uint32_t component(Vertex v) const { return comp_[v]; }
  std::size_t component_count() const { return members_.size(); }
  const VertexSet& component_members(std::uint32_t c) const { return members_[c]; }

  bool adjacent(Vertex a, Vertex b) const {
    const auto& n = adj_[a];
    return std::binary_search(n.begin(), n.end(), b);
  }

  friend WeightedGraph build_graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges);

 private:
  std::vector<std::vector<Vertex>> adj_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::vector<std::uint32_t> comp_;
  std::vector<VertexSet> members_;
  std::size_t max_degree_ = 0;
};

inline WeightedGraph build_graph(std::size_t n, std::span<const std::pair<Vertex, Vertex>> edges) {
  WeightedGraph g;
  g.adj_.assign(n, {});
  g.edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= n || b >= n)
      throw Error(ErrorKind::MalformedGraph,
                  "edge (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
    if (a == b) throw Error(ErrorKind::MalformedGraph, "self-loop at " + std::to_string(a));
    g.adj_[a].push_back(b);
    g.adj_[b].push_back(a);
    g.edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  for (Vertex v = 0; v < n; ++v) {
    auto& nb = g.adj_[v];
    std::sort(nb.begin(), nb.end());
    if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
      throw Error(ErrorKind::MalformedGraph, "duplicate edge at " + std::to_string(v));
    g.max_degree_ = std::max(g.max_degree_, nb.size());
  }
  std::sort(g.edges_.begin(), g.edges_.end());

  constexpr auto unset = static_cast<std::uint32_t>(-1);
  g.comp_.assign(n, unset);
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < n; ++s) {
    if (g.comp_[s] != unset) continue;
    auto c = static_cast<std::uint32_t>(g.members_.size());
    VertexSet members;
    g.comp_[s] = c;
    stack.push_back(s);
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      members.push_back(v);
      for (Vertex u : g.adj_[v])
        if (g.comp_[u] == unset) {
          g.comp_[u] = c;
          stack.push_back(u);
        }
    }
    std::sort(members.begin(), members.end());
    g.members_.push_back(std::move(members));
  }
  return g;
}

inline WeightedGraph build_graph(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  return build_graph(n, std::span<const std::pair<Vertex, Vertex>>(edges));
}

// Vertices adjacent to `set` but not in it.
inline VertexSet outer_boundary(const WeightedGraph& g, std::span<const Vertex> set) {
  std::vector<Vertex> out;
  for (Vertex v : set)
    for (Vertex u : g.neighbors(v))
      if (!std::binary_search(set.begin(), set.end(), u)) out.push_back(u);
  return make_set(std::move(out));
}

// Membership marks for a sorted set, reusable across calls.
class Marks {
 public:
  explicit Marks(std::size_t n = 0) : stamp_(n, 0) {}
  void reset(std::size_t n) {
    if (stamp_.size() != n) stamp_.assign(n, 0), epoch_ = 0;
    if (++epoch_ == 0) std::fill(stamp_.begin(), stamp_.end(), 0), epoch_ = 1;
  }
  void set(Vertex v) { stamp_[v] = epoch_; }
  bool test(Vertex v) const { return stamp_[v] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

inline bool is_connected_set(const WeightedGraph& g, std::span<const Vertex> set) {
  if (set.empty()) return false;
  std::vector<char> seen(set.size(), 0);
  auto index = [&](Vertex u) -> std::ptrdiff_t {
    auto it = std::lower_bound(set.begin(), set.end(), u);
    return (it != set.end() && *it == u) ? it - set.begin() : -1;
  };
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (Vertex u : g.neighbors(set[i])) {
      auto j = index(u);
      if (j >= 0 && !seen[j]) {
        seen[j] = 1;
        ++reached;
        stack.push_back(static_cast<std::size_t>(j));
      }
    }
  }
  return reached == set.size();
}

// Connected components of the subgraph induced on `set`.
inline std::vector<VertexSet> induced_components(const WeightedGraph& g, std::span<const Vertex> set) {
  std::vector<VertexSet> out;
  std::vector<char> seen(set.size(), 0);
  auto index = [&](Vertex u) -> std::ptrdiff_t {
    auto it = std::lower_bound(set.begin(), set.end(), u);
    return (it != set.end() && *it == u) ? it - set.begin() : -1;
  };
  for (std::size_t s = 0; s < set.size(); ++s) {
    if (seen[s]) continue;
    VertexSet comp;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      comp.push_back(set[i]);
      for (Vertex u : g.neighbors(set[i])) {
        auto j = index(u);
        if (j >= 0 && !seen[j]) {
          seen[j] = 1;
          stack.push_back(static_cast<std::size_t>(j));
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Small fixtures used across tests and the CLI.
inline WeightedGraph path_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return build_graph(n, e);
}

inline WeightedGraph cycle_graph(std::size_t n) {
  std::vector<std::pair<Vertex, Vertex>> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (n >= 3) e.emplace_back(static_cast<Vertex>(n - 1), 0);
  return build_graph(n, e);
}

}  // namespace ergodic
