#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "cocycle.hpp"
#include "graph.hpp"

namespace ergodic {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n = 0) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }
  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::uint8_t> rank_;
};

inline constexpr std::uint32_t kNoCell = static_cast<std::uint32_t>(-1);

// Pairwise disjoint nonempty cells; cells are kept sorted by their smallest vertex.
class Prepartition {
 public:
  Prepartition() = default;
  explicit Prepartition(std::size_t n) : cell_of_(n, kNoCell) {}

  Prepartition(std::size_t n, std::vector<VertexSet> cells) : cell_of_(n, kNoCell) {
    for (auto& c : cells) {
      c = make_set(std::move(c));
      if (c.empty()) throw Error(ErrorKind::EmptySet, "empty cell");
    }
    std::sort(cells.begin(), cells.end(), [](const VertexSet& a, const VertexSet& b) { return a.front() < b.front(); });
    cells_ = std::move(cells);
    reindex();
  }

  std::size_t vertex_count() const { return cell_of_.size(); }
  const std::vector<VertexSet>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool in_domain(Vertex v) const { return cell_of_[v] != kNoCell; }
  std::uint32_t cell_of(Vertex v) const { return cell_of_[v]; }

  VertexSet domain() const {
    VertexSet d;
    for (Vertex v = 0; v < cell_of_.size(); ++v)
      if (in_domain(v)) d.push_back(v);
    return d;
  }

  // Replace every cell inside `a` by `a`. Requires `a` to be E(P)-invariant.
  void absorb(VertexSet a) {
    std::vector<VertexSet> keep;
    keep.reserve(cells_.size() + 1);
    for (auto& c : cells_)
      if (!sets_intersect(c, a)) keep.push_back(std::move(c));
    keep.push_back(std::move(a));
    std::sort(keep.begin(), keep.end(), [](const VertexSet& x, const VertexSet& y) { return x.front() < y.front(); });
    cells_ = std::move(keep);
    reindex();
  }

  bool operator==(const Prepartition& o) const { return cells_ == o.cells_ && cell_of_.size() == o.cell_of_.size(); }

 private:
  void reindex() {
    std::fill(cell_of_.begin(), cell_of_.end(), kNoCell);
    for (std::uint32_t i = 0; i < cells_.size(); ++i)
      for (Vertex v : cells_[i]) {
        if (v >= cell_of_.size()) throw Error(ErrorKind::MalformedGraph, "cell vertex out of range");
        if (cell_of_[v] != kNoCell) throw Error(ErrorKind::NotDisjoint, "vertex " + std::to_string(v) + " in two cells");
        cell_of_[v] = i;
      }
  }

  std::vector<VertexSet> cells_;
  std::vector<std::uint32_t> cell_of_;
};

// Equivalence relation with finite classes; classes numbered by smallest member.
class EquivRel {
 public:
  EquivRel() = default;

  static EquivRel identity(std::size_t n) {
    std::vector<std::uint32_t> label(n);
    std::iota(label.begin(), label.end(), 0u);
    return from_labels(label);
  }

  static EquivRel from_labels(std::span<const std::uint32_t> label) {
    EquivRel e;
    std::size_t n = label.size();
    e.class_of_.assign(n, kNoCell);
    std::vector<std::uint32_t> remap(n == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1, kNoCell);
    for (Vertex v = 0; v < n; ++v) {
      auto& r = remap[label[v]];
      if (r == kNoCell) {
        r = static_cast<std::uint32_t>(e.classes_.size());
        e.classes_.emplace_back();
      }
      e.class_of_[v] = r;
      e.classes_[r].push_back(v);
    }
    return e;
  }

  // E(P): cells are classes, everything else is a singleton.
  static EquivRel of(const Prepartition& p) {
    std::vector<std::uint32_t> label(p.vertex_count());
    for (Vertex v = 0; v < label.size(); ++v) label[v] = p.in_domain(v) ? p.cells()[p.cell_of(v)].front() : v;
    return from_labels(label);
  }

  std::size_t vertex_count() const { return class_of_.size(); }
  std::size_t class_count() const { return classes_.size(); }
  std::uint32_t class_of(Vertex v) const { return class_of_[v]; }
  const VertexSet& class_members(std::uint32_t c) const { return classes_[c]; }
  const std::vector<VertexSet>& classes() const { return classes_; }
  bool related(Vertex a, Vertex b) const { return class_of_[a] == class_of_[b]; }

  bool is_invariant(std::span<const Vertex> set) const {
    for (Vertex v : set)
      for (Vertex u : classes_[class_of_[v]])
        if (!std::binary_search(set.begin(), set.end(), u)) return false;
    return true;
  }

  bool operator==(const EquivRel& o) const { return classes_ == o.classes_; }

 private:
  std::vector<std::uint32_t> class_of_;
  std::vector<VertexSet> classes_;
};

// Smallest equivalence relation containing both.
inline EquivRel join(const EquivRel& a, const EquivRel& b) {
  std::size_t n = a.vertex_count();
  DisjointSets ds(n);
  for (const auto* e : {&a, &b})
    for (const auto& c : e->classes())
      for (std::size_t i = 1; i < c.size(); ++i) ds.unite(c[0], c[i]);
  std::vector<std::uint32_t> label(n);
  for (Vertex v = 0; v < n; ++v) label[v] = ds.find(v);
  return EquivRel::from_labels(label);
}

struct QuotientModel {
  WeightedGraph graph;
  Cocycle cocycle;
  std::vector<double> function;
  EquivRel relation;  // class index in `relation` is the quotient vertex id
};

// Collapse F-classes. Class log-weight is log-sum-exp; function becomes the weighted mean.
inline QuotientModel quotient(const WeightedGraph& g, const Cocycle& rho, std::span<const double> f,
                              const EquivRel& F) {
  std::size_t k = F.class_count();
  std::vector<double> lw(k), fq(k, 0.0);
  for (std::uint32_t c = 0; c < k; ++c) {
    const auto& mem = F.class_members(c);
    if (!is_connected_set(g, mem))
      throw Error(ErrorKind::DisconnectedClass, "class containing " + std::to_string(mem.front()) + " is not connected");
    SetSummary s = summarize(rho, f, mem);
    lw[c] = s.log_mass();
    fq[c] = f.empty() ? 0.0 : s.average();
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (auto [a, b] : g.edges()) {
    Vertex ca = F.class_of(a), cb = F.class_of(b);
    if (ca != cb) edges.emplace_back(std::min(ca, cb), std::max(ca, cb));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return {build_graph(k, edges), Cocycle(std::move(lw)), std::move(fq), F};
}

// Union of the members of the given quotient vertices.
inline VertexSet lift(const EquivRel& F, std::span<const Vertex> qset) {
  VertexSet out;
  for (Vertex c : qset) out.insert(out.end(), F.class_members(c).begin(), F.class_members(c).end());
  return make_set(std::move(out));
}

}  // namespace ergodic
