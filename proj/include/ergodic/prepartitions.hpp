#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "families.hpp"
#include "partition.hpp"

namespace ergodic {

struct SearchBudget {
  enum class Mode { Auto, Exhaustive, Heuristic };
  Mode mode = Mode::Auto;
  std::size_t exhaustive_max = 12;  // components up to this size are searched exhaustively
  std::size_t max_classes = 64;     // heuristic candidates hold at most this many E(P)-classes
};

inline constexpr std::size_t kExactLimit = 20;

namespace detail {

using ClassRef = std::uint32_t;

// Mutable prepartition with per-cell summaries. Class refs below n are fresh vertices,
// refs from n up are cell slots.
class WorkingPartition {
 public:
  WorkingPartition(const Instance& in, const Prepartition& p)
      : in_(in), n_(static_cast<Vertex>(in.graph.vertex_count())), cell_of_(n_, kNoCell), ids_(n_), vsum_(n_) {
    for (Vertex v = 0; v < n_; ++v) {
      ids_[v] = v;
      vsum_[v].add(in.rho.log_weight(v), in.f.empty() ? 0.0 : in.f[v]);
    }
    for (const auto& c : p.cells()) absorb_set(c);
  }

  Vertex n() const { return n_; }
  bool fresh(Vertex v) const { return cell_of_[v] == kNoCell; }
  bool is_cell(ClassRef c) const { return c >= n_; }
  ClassRef class_of(Vertex v) const { return fresh(v) ? v : n_ + cell_of_[v]; }
  std::span<const Vertex> members(ClassRef c) const {
    return c < n_ ? std::span<const Vertex>(&ids_[c], 1) : std::span<const Vertex>(cells_[c - n_]);
  }
  const SetSummary& summary(ClassRef c) const { return c < n_ ? vsum_[c] : csum_[c - n_]; }
  Vertex rep(ClassRef c) const { return c < n_ ? c : cmin_[c - n_]; }
  const SetSummary& vertex_summary(Vertex v) const { return vsum_[v]; }
  // Vertices adjacent to the class from outside.
  std::span<const Vertex> boundary(ClassRef c) const {
    return c < n_ ? in_.graph.neighbors(c) : std::span<const Vertex>(bnd_[c - n_]);
  }

  // Merges the given classes into one cell, reusing the slot of the largest cell among them.
  void absorb(std::span<const ClassRef> classes) {
    std::uint32_t slot = kNoCell;
    for (ClassRef c : classes)
      if (is_cell(c) && (slot == kNoCell || cells_[c - n_].size() > cells_[slot].size())) slot = c - n_;
    if (slot == kNoCell) {
      slot = static_cast<std::uint32_t>(cells_.size());
      cells_.emplace_back();
      csum_.emplace_back();
      bnd_.emplace_back();
      cmin_.push_back(n_);
    }
    std::vector<Vertex> edge;
    for (ClassRef c : classes) {
      if (c == n_ + slot) continue;
      auto b = boundary(c);
      edge.insert(edge.end(), b.begin(), b.end());
      csum_[slot].merge(summary(c));
      cmin_[slot] = std::min(cmin_[slot], rep(c));
      if (is_cell(c)) {
        auto& src = cells_[c - n_];
        for (Vertex v : src) cell_of_[v] = slot;
        cells_[slot].insert(cells_[slot].end(), src.begin(), src.end());
        src.clear();
        src.shrink_to_fit();
        bnd_[c - n_].clear();
      } else {
        cell_of_[c] = slot;
        cells_[slot].push_back(c);
      }
    }
    edge.insert(edge.end(), bnd_[slot].begin(), bnd_[slot].end());
    std::erase_if(edge, [&](Vertex v) { return cell_of_[v] == slot; });
    bnd_[slot] = make_set(std::move(edge));
  }

  // `a` must be a union of classes.
  void absorb_set(const VertexSet& a) {
    std::vector<ClassRef> classes;
    for (Vertex v : a)
      if (fresh(v) || cmin_[cell_of_[v]] == v) classes.push_back(class_of(v));
    absorb(classes);
  }

  Prepartition to_prepartition() const {
    std::vector<VertexSet> live;
    for (const auto& c : cells_)
      if (!c.empty()) live.push_back(c);
    return Prepartition(n_, std::move(live));
  }

  std::vector<Vertex> cell_reps() const {
    std::vector<Vertex> r;
    for (std::size_t i = 0; i < cells_.size(); ++i)
      if (!cells_[i].empty()) r.push_back(cmin_[i]);
    std::sort(r.begin(), r.end());
    return r;
  }

  VertexSet assemble(std::span<const ClassRef> classes) const {
    VertexSet out;
    for (ClassRef c : classes) {
      auto m = members(c);
      out.insert(out.end(), m.begin(), m.end());
    }
    return make_set(std::move(out));
  }

 private:
  Instance in_;
  Vertex n_;
  std::vector<std::uint32_t> cell_of_;
  std::vector<Vertex> ids_;
  std::vector<SetSummary> vsum_;
  std::vector<VertexSet> cells_;  // unsorted
  std::vector<SetSummary> csum_;
  std::vector<VertexSet> bnd_;
  std::vector<Vertex> cmin_;
};

// Summaries of a candidate split into its fresh part and its covered part.
struct Candidate {
  SetSummary all, fresh, covered;
  std::size_t classes = 0;

  void add(const WorkingPartition& w, ClassRef c) {
    const auto& s = w.summary(c);
    all.merge(s);
    (w.is_cell(c) ? covered : fresh).merge(s);
    ++classes;
  }
};

// ρ(A \ dom) ≥ p ρ(A ∩ dom), compared on a common scale.
inline bool pack_ratio_holds(const SetSummary& fresh, const SetSummary& covered, double p) {
  if (fresh.count == 0) return false;
  if (covered.count == 0) return true;
  double ref = std::max(fresh.log_ref, covered.log_ref);
  return fresh.mass * std::exp(fresh.log_ref - ref) >= p * covered.mass * std::exp(covered.log_ref - ref);
}

inline double relative_gain(const SetSummary& fresh, const SetSummary& base) {
  return std::log(fresh.mass) + fresh.log_ref - base.log_mass();
}

// Grows a connected union of classes from `start`, calling visit(candidate) after each addition.
// Greedy mode adds the frontier class with the smallest family growth key (smallest id on ties);
// otherwise classes are added breadth-first.
template <class Visit>
void grow_candidate(const WorkingPartition& w, const CellFamily& fam, ClassRef start, bool greedy,
                    bool fresh_only, std::size_t max_classes, Marks& in_cand, Marks& in_front,
                    std::vector<ClassRef>& added, Visit&& visit) {
  in_cand.reset(w.n());
  in_front.reset(w.n());
  added.clear();
  Candidate cand;
  std::vector<ClassRef> frontier;
  std::size_t head = 0;
  auto take = [&](ClassRef c) {
    added.push_back(c);
    cand.add(w, c);
    in_cand.set(w.rep(c));
    for (Vertex nb : w.boundary(c)) {
      ClassRef d = w.class_of(nb);
      Vertex r = w.rep(d);
      if (in_cand.test(r) || in_front.test(r)) continue;
      if (fresh_only && w.is_cell(d)) continue;
      in_front.set(r);
      frontier.push_back(d);
    }
  };
  take(start);
  if (visit(cand)) return;
  while (added.size() < max_classes && head < frontier.size()) {
    std::size_t pick = head;
    if (greedy) {
      double best = INFINITY;
      Vertex best_rep = 0;
      for (std::size_t i = head; i < frontier.size(); ++i) {
        SetSummary ext = cand.all;
        ext.merge(w.summary(frontier[i]));
        double key = fam.growth_key(ext);
        Vertex r = w.rep(frontier[i]);
        if (key < best || (key == best && r < best_rep)) best = key, best_rep = r, pick = i;
      }
      std::swap(frontier[pick], frontier[head]);
      pick = head;
    }
    ClassRef c = frontier[pick];
    ++head;
    take(c);
    if (visit(cand)) return;
  }
}

// Connected subsets of a small vertex list, as bitmasks over its positions.
class SmallComponent {
 public:
  SmallComponent(const WeightedGraph& g, const VertexSet& verts) : verts_(verts), adj_(verts.size(), 0) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (Vertex nb : g.neighbors(verts[i])) {
        auto it = std::lower_bound(verts.begin(), verts.end(), nb);
        if (it != verts.end() && *it == nb) adj_[i] |= 1u << (it - verts.begin());
      }
  }
  std::size_t size() const { return verts_.size(); }
  Vertex vertex(std::size_t i) const { return verts_[i]; }
  bool connected(std::uint32_t mask) const {
    if (!mask) return false;
    std::uint32_t seen = mask & (~mask + 1), grow = seen;
    while (grow) {
      std::uint32_t next = 0;
      for (std::uint32_t b = grow; b; b &= b - 1) next |= adj_[std::countr_zero(b)];
      next &= mask & ~seen;
      seen |= next;
      grow = next;
    }
    return seen == mask;
  }
  VertexSet set_of(std::uint32_t mask) const {
    VertexSet s;
    for (std::uint32_t b = mask; b; b &= b - 1) s.push_back(verts_[std::countr_zero(b)]);
    return s;
  }
  // Masks ordered by smallest vertex, then larger sets first, then mask.
  std::vector<std::uint32_t> ordered_masks() const {
    std::vector<std::uint32_t> m((std::size_t{1} << size()) - 1);
    for (std::uint32_t i = 0; i < m.size(); ++i) m[i] = i + 1;
    std::sort(m.begin(), m.end(), [](std::uint32_t a, std::uint32_t b) {
      int za = std::countr_zero(a), zb = std::countr_zero(b);
      if (za != zb) return za < zb;
      int pa = std::popcount(a), pb = std::popcount(b);
      return pa != pb ? pa > pb : a < b;
    });
    return m;
  }

 private:
  VertexSet verts_;
  std::vector<std::uint32_t> adj_;
};

inline bool use_exhaustive(const SearchBudget& b, std::size_t comp_size) {
  switch (b.mode) {
    case SearchBudget::Mode::Exhaustive:
      if (comp_size > kExactLimit)
        throw Error(ErrorKind::TooLargeForExact, "component of " + std::to_string(comp_size) + " vertices");
      return true;
    case SearchBudget::Mode::Heuristic: return false;
    case SearchBudget::Mode::Auto: return comp_size <= b.exhaustive_max;
  }
  return false;
}

// Bitmask of cells of a small component, used to test E(P)-invariance.
inline std::vector<std::uint32_t> cell_masks(const WorkingPartition& w, const SmallComponent& sc) {
  std::vector<std::uint32_t> masks;
  std::vector<std::pair<ClassRef, std::uint32_t>> acc;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    Vertex v = sc.vertex(i);
    if (w.fresh(v)) continue;
    ClassRef c = w.class_of(v);
    auto it = std::find_if(acc.begin(), acc.end(), [&](const auto& e) { return e.first == c; });
    if (it == acc.end()) acc.emplace_back(c, 1u << i);
    else it->second |= 1u << i;
  }
  for (auto& [c, m] : acc) masks.push_back(m);
  return masks;
}

inline bool mask_invariant(std::uint32_t mask, std::span<const std::uint32_t> cells) {
  for (auto c : cells)
    if ((mask & c) && (mask & c) != c) return false;
  return true;
}

inline Candidate summarize_mask(const WorkingPartition& w, const SmallComponent& sc, std::uint32_t mask) {
  Candidate cand;
  for (std::uint32_t b = mask; b; b &= b - 1) {
    Vertex v = sc.vertex(std::countr_zero(b));
    cand.all.merge(w.vertex_summary(v));
    (w.fresh(v) ? cand.fresh : cand.covered).merge(w.vertex_summary(v));
  }
  return cand;
}

inline std::optional<VertexSet> exhaustive_pack(const WorkingPartition& w, const CellFamily& fam,
                                                const SmallComponent& sc, double p) {
  auto cells = cell_masks(w, sc);
  for (std::uint32_t mask : sc.ordered_masks()) {
    if (!mask_invariant(mask, cells) || !sc.connected(mask)) continue;
    Candidate c = summarize_mask(w, sc, mask);
    if (pack_ratio_holds(c.fresh, c.covered, p) && fam.admits(c.all)) return sc.set_of(mask);
  }
  return std::nullopt;
}

struct Searcher {
  Searcher(const Instance& i, const CellFamily& f, const SearchBudget& b) : in(i), fam(f), budget(b) {}
  const Instance& in;
  const CellFamily& fam;
  const SearchBudget& budget;
  Marks a{0}, b{0};
  std::vector<ClassRef> added;

  std::optional<std::vector<ClassRef>> pack_at(const WorkingPartition& w, Vertex anchor, double p) {
    for (bool greedy : {true, false}) {
      bool found = false;
      grow_candidate(w, fam, w.class_of(anchor), greedy, false, budget.max_classes, a, b, added,
                     [&](const Candidate& c) {
                       return found = pack_ratio_holds(c.fresh, c.covered, p) && fam.admits(c.all);
                     });
      if (found) return added;
    }
    return std::nullopt;
  }

  // Best injective strict superset of the cell at `rep`, if any.
  std::optional<std::vector<ClassRef>> extension_of(const WorkingPartition& w, Vertex rep, double threshold) {
    ClassRef cell = w.class_of(rep);
    const SetSummary& base = w.summary(cell);
    std::optional<std::vector<ClassRef>> best;
    double best_gain = -INFINITY;
    for (bool greedy : {true, false}) {
      std::size_t best_len = 0;
      double gain_here = -INFINITY;
      grow_candidate(w, fam, cell, greedy, true, budget.max_classes, a, b, added, [&](const Candidate& c) {
        if (c.classes > 1 && pack_ratio_holds(c.fresh, c.covered, threshold) && fam.admits(c.all)) {
          double gain = relative_gain(c.fresh, base);
          if (gain > gain_here) gain_here = gain, best_len = c.classes;
        }
        return false;
      });
      if (best_len && gain_here > best_gain) {
        best_gain = gain_here;
        best.emplace(added.begin(), added.begin() + static_cast<std::ptrdiff_t>(best_len));
      }
    }
    return best;
  }
};

inline std::optional<VertexSet> exhaustive_extension(const WorkingPartition& w, const CellFamily& fam,
                                                     const SmallComponent& sc, Vertex rep, double threshold) {
  ClassRef cell = w.class_of(rep);
  std::uint32_t cell_mask = 0, fresh_mask = 0;
  for (std::size_t i = 0; i < sc.size(); ++i) {
    if (w.class_of(sc.vertex(i)) == cell) cell_mask |= 1u << i;
    if (w.fresh(sc.vertex(i))) fresh_mask |= 1u << i;
  }
  std::optional<VertexSet> best;
  double best_gain = -INFINITY;
  // nonempty subsets of fresh_mask, largest mask first
  for (std::uint32_t s = fresh_mask; s; s = (s - 1) & fresh_mask) {
    std::uint32_t mask = cell_mask | s;
    if (!sc.connected(mask)) continue;
    Candidate c = summarize_mask(w, sc, mask);
    if (!pack_ratio_holds(c.fresh, c.covered, threshold) || !fam.admits(c.all)) continue;
    double gain = relative_gain(c.fresh, w.summary(cell));
    if (gain >= best_gain) best_gain = gain, best = sc.set_of(mask);
  }
  return best;
}

}  // namespace detail

inline bool is_E_invariant(const Prepartition& p, std::span<const Vertex> a) {
  for (Vertex v : a)
    if (p.in_domain(v))
      for (Vertex u : p.cells()[p.cell_of(v)])
        if (!std::binary_search(a.begin(), a.end(), u)) return false;
  return true;
}

// A is a p-pack over P: a family member, E(P)-invariant, ρ(A \ dom) ≥ p ρ(A ∩ dom).
inline bool is_p_pack(const Instance& in, const CellFamily& fam, const Prepartition& P, double p,
                      std::span<const Vertex> a) {
  if (!family_contains(in, fam, a) || !is_E_invariant(P, a)) return false;
  SetSummary fresh, covered;
  for (Vertex v : a) (P.in_domain(v) ? covered : fresh).add(in.rho.log_weight(v), in.f.empty() ? 0.0 : in.f[v]);
  return detail::pack_ratio_holds(fresh, covered, p);
}

// Contains at most one cell of P and is E(P)-invariant.
inline bool is_injective_over(const Prepartition& P, std::span<const Vertex> a) {
  if (!is_E_invariant(P, a)) return false;
  std::uint32_t seen = kNoCell;
  for (Vertex v : a)
    if (P.in_domain(v)) {
      if (seen != kNoCell && P.cell_of(v) != seen) return false;
      seen = P.cell_of(v);
    }
  return true;
}

struct PackSearch {
  std::optional<VertexSet> pack;
  bool exhaustive = true;  // false when some component was only searched heuristically
};

inline PackSearch find_pack(const Instance& in, const CellFamily& fam, const Prepartition& P, double p,
                            const SearchBudget& budget = {}) {
  detail::WorkingPartition w(in, P);
  detail::Searcher s{in, fam, budget};
  PackSearch out;
  for (std::uint32_t c = 0; c < in.graph.component_count(); ++c) {
    const auto& mem = in.graph.component_members(c);
    if (detail::use_exhaustive(budget, mem.size())) {
      if (auto a = detail::exhaustive_pack(w, fam, detail::SmallComponent(in.graph, mem), p)) {
        out.pack = a;
        return out;
      }
    } else {
      out.exhaustive = false;
      for (Vertex v : mem)
        if (w.fresh(v))
          if (auto a = s.pack_at(w, v, p)) {
            out.pack = w.assemble(*a);
            return out;
          }
    }
  }
  return out;
}

namespace detail {

inline bool pack_pass(WorkingPartition& w, const Instance& in, const CellFamily& fam, double p,
                      const SearchBudget& budget, Searcher& s) {
  bool progress = false;
  for (std::uint32_t c = 0; c < in.graph.component_count(); ++c) {
    const auto& mem = in.graph.component_members(c);
    if (use_exhaustive(budget, mem.size())) {
      SmallComponent sc(in.graph, mem);
      while (auto a = exhaustive_pack(w, fam, sc, p)) {
        w.absorb_set(*a);
        progress = true;
      }
    } else {
      for (Vertex v : mem)
        if (w.fresh(v))
          if (auto a = s.pack_at(w, v, p)) {
            w.absorb(*a);
            progress = true;
          }
    }
  }
  return progress;
}

inline bool saturate_pass(WorkingPartition& w, const Instance& in, const CellFamily& fam, double threshold,
                          const SearchBudget& budget, Searcher& s) {
  bool progress = false;
  for (Vertex rep : w.cell_reps()) {
    const auto& mem = in.graph.component_members(in.graph.component(rep));
    bool exact = use_exhaustive(budget, mem.size());
    std::optional<SmallComponent> sc;
    if (exact) sc.emplace(in.graph, mem);
    while (true) {
      if (exact) {
        auto a = exhaustive_extension(w, fam, *sc, rep, threshold);
        if (!a) break;
        w.absorb_set(*a);
      } else {
        auto a = s.extension_of(w, rep, threshold);
        if (!a) break;
        w.absorb(*a);
      }
      progress = true;
    }
  }
  return progress;
}

}  // namespace detail

// Repeatedly absorbs p-packs until none can be found within the budget.
inline Prepartition packed(const Instance& in, const CellFamily& fam, double p, const SearchBudget& budget = {},
                           const Prepartition* start = nullptr) {
  Prepartition empty(in.graph.vertex_count());
  detail::WorkingPartition w(in, start ? *start : empty);
  detail::Searcher s{in, fam, budget};
  while (detail::pack_pass(w, in, fam, p, budget, s)) {
  }
  return w.to_prepartition();
}

// Grows each cell by injective family supersets, largest ρ-gain first, until none remain.
// A positive threshold only accepts growth adding at least threshold·ρ(cell).
inline Prepartition saturate(const Instance& in, const CellFamily& fam, const Prepartition& P,
                             const SearchBudget& budget = {}, double threshold = 0) {
  detail::WorkingPartition w(in, P);
  detail::Searcher s{in, fam, budget};
  detail::saturate_pass(w, in, fam, threshold, budget, s);
  return w.to_prepartition();
}

struct PackedSaturated {
  Prepartition partition;
  std::size_t rounds = 0;
};

// p/2-packed start, then saturation rounds at thresholds p/2^(k+1) interleaved with packing,
// finishing with an unrestricted saturation round that changes nothing.
inline PackedSaturated packed_and_saturated(const Instance& in, const CellFamily& fam, double p,
                                            const SearchBudget& budget = {}, std::size_t max_rounds = 200) {
  Prepartition empty(in.graph.vertex_count());
  detail::WorkingPartition w(in, empty);
  detail::Searcher s{in, fam, budget};
  while (detail::pack_pass(w, in, fam, p / 2, budget, s)) {
  }
  double threshold = p / 2;
  for (std::size_t k = 1; k <= max_rounds; ++k) {
    threshold = threshold > 1e-300 ? threshold / 2 : 0.0;
    bool changed = detail::saturate_pass(w, in, fam, threshold, budget, s);
    while (detail::pack_pass(w, in, fam, p / 2, budget, s)) changed = true;
    if (!changed) {
      bool last = detail::saturate_pass(w, in, fam, 0.0, budget, s);
      while (detail::pack_pass(w, in, fam, p / 2, budget, s)) last = true;
      if (!last) return {w.to_prepartition(), k};
    }
  }
  throw Error(ErrorKind::IterationCap, "packed_and_saturated did not settle in " + std::to_string(max_rounds) + " rounds");
}

struct CoherentLimit {
  Prepartition limit;
  bool stabilized = false;
};

// Each later cell must be E(earlier)-invariant. The limit is the join restricted to the union of domains.
inline CoherentLimit coherent_limit(std::span<const Prepartition> seq) {
  if (seq.empty()) return {};
  std::size_t n = seq.front().vertex_count();
  for (std::size_t j = 0; j < seq.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      for (const auto& c : seq[j].cells())
        if (!is_E_invariant(seq[i], c))
          throw Error(ErrorKind::NotCoherent, "cell at " + std::to_string(c.front()) + " of prepartition " +
                                                  std::to_string(j) + " splits a cell of prepartition " +
                                                  std::to_string(i));
  DisjointSets ds(n);
  std::vector<char> dom(n, 0);
  for (const auto& P : seq)
    for (const auto& c : P.cells())
      for (Vertex v : c) {
        dom[v] = 1;
        ds.unite(c.front(), v);
      }
  std::vector<VertexSet> groups(n);
  for (Vertex v = 0; v < n; ++v)
    if (dom[v]) groups[ds.find(v)].push_back(v);
  std::vector<VertexSet> cells;
  for (auto& g : groups)
    if (!g.empty()) cells.push_back(std::move(g));
  CoherentLimit out{Prepartition(n, cells), true};
  for (const auto& c : out.limit.cells()) {
    bool found = false;
    for (const auto& P : seq)
      if (P.in_domain(c.front()) && P.cells()[P.cell_of(c.front())] == c) found = true;
    out.stabilized &= found;
  }
  return out;
}

struct LargeRatioResult {
  Prepartition partition;
  double covered_mass = 0;
  std::size_t stages = 0;
  std::vector<std::uint32_t> uncoverable_components;  // total ratio below the floor
};

// Nested saturations in successive quotients with ratio floors L·4^n until μ-mass 1-ε is covered.
inline LargeRatioResult large_ratio_prepartition(const Instance& in, const CellFamily& fam, const RhoMeasure& mu,
                                                 double eps, double L, std::size_t max_stages = 16,
                                                 const SearchBudget& budget = {}) {
  std::size_t n = in.graph.vertex_count();
  LargeRatioResult out{Prepartition(n), 0, 0, {}};
  for (std::uint32_t c = 0; c < in.graph.component_count(); ++c)
    if (rho_max_ratio(in.graph, in.rho, in.graph.component_members(c)) < L) out.uncoverable_components.push_back(c);

  EquivRel F = EquivRel::identity(n);
  std::vector<char> covered(n, 0);
  double Ln = L;
  for (std::size_t stage = 0; stage < max_stages; ++stage, Ln *= 4) {
    QuotientModel q = quotient(in.graph, in.rho, in.f, F);
    Instance qi{q.graph, q.cocycle, q.function};
    RatioFloorFamily fl(fam, Ln);
    SearchBudget b = budget;
    b.max_classes = std::max(b.max_classes, static_cast<std::size_t>(2 * Ln));
    Prepartition qp = packed_and_saturated(qi, fl, 1.0, b).partition;
    Prepartition lifted(n);
    {
      std::vector<VertexSet> cells;
      for (const auto& c : qp.cells()) cells.push_back(lift(q.relation, c));
      lifted = Prepartition(n, std::move(cells));
    }
    F = join(F, EquivRel::of(lifted));
    out.stages = stage + 1;
    for (const auto& c : lifted.cells())
      for (Vertex v : c) covered[v] = 1;
    // classes made of cells of some stage
    std::vector<VertexSet> cells;
    double mass = 0;
    for (const auto& cls : F.classes())
      if (covered[cls.front()]) {
        cells.push_back(cls);
        mass += mu.mass(cls);
      }
    out.partition = Prepartition(n, std::move(cells));
    out.covered_mass = mass;
    if (mass >= 1 - eps) break;
  }
  return out;
}

}  // namespace ergodic
