#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "graph.hpp"

namespace ergodic {

// rho(x, y) = exp(lw[x] - lw[y]). The cocycle identity holds by construction.
class Cocycle {
 public:
  Cocycle() = default;
  explicit Cocycle(std::vector<double> log_weight) : lw_(std::move(log_weight)) {}
  static Cocycle trivial(std::size_t n) { return Cocycle(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return lw_.size(); }
  double log_weight(Vertex v) const { return lw_[v]; }
  const std::vector<double>& log_weights() const { return lw_; }
  double rho(Vertex x, Vertex y) const { return std::exp(lw_[x] - lw_[y]); }

  double max_log_weight(std::span<const Vertex> set) const {
    double m = -std::numeric_limits<double>::infinity();
    for (Vertex v : set) m = std::max(m, lw_[v]);
    return m;
  }

  // Sum of exp(lw - ref) over the set.
  double relative_mass(std::span<const Vertex> set, double ref) const {
    double s = 0;
    for (Vertex v : set) s += std::exp(lw_[v] - ref);
    return s;
  }

  // Weights of `set` normalised so the heaviest is 1.
  std::vector<double> normalized_weights(std::span<const Vertex> set) const {
    double ref = max_log_weight(set);
    std::vector<double> w(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) w[i] = std::exp(lw_[set[i]] - ref);
    return w;
  }

 private:
  std::vector<double> lw_;
};

inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  double m = *std::max_element(xs.begin(), xs.end());
  double s = 0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline void require_same_component(const WeightedGraph& g, std::span<const Vertex> set) {
  for (Vertex v : set)
    if (g.component(v) != g.component(set.front()))
      throw Error(ErrorKind::CrossComponent, "vertices " + std::to_string(set.front()) + " and " +
                                                 std::to_string(v) + " lie in different components");
}

// rho(U) / max_{u in U} rho(u); lies in [1, |U|].
inline double rho_max_ratio(const WeightedGraph& g, const Cocycle& rho, std::span<const Vertex> set) {
  if (set.empty()) throw Error(ErrorKind::EmptySet, "rho_max_ratio of empty set");
  require_same_component(g, set);
  return rho.relative_mass(set, rho.max_log_weight(set));
}

// Total order: rho ascending, id ascending among ties. Returns vertex ids in that order.
inline std::vector<Vertex> rho_order(const Cocycle& rho, std::span<const Vertex> set) {
  std::vector<Vertex> out(set.begin(), set.end());
  std::stable_sort(out.begin(), out.end(), [&](Vertex a, Vertex b) {
    double la = rho.log_weight(a), lb = rho.log_weight(b);
    return la != lb ? la < lb : a < b;
  });
  return out;
}

inline std::vector<Vertex> rho_order(const Cocycle& rho) {
  std::vector<Vertex> all(rho.size());
  std::iota(all.begin(), all.end(), Vertex{0});
  return rho_order(rho, all);
}

// Heaviest first, smaller id first among ties.
inline std::vector<Vertex> rho_decreasing(const Cocycle& rho, std::span<const Vertex> set) {
  std::vector<Vertex> out(set.begin(), set.end());
  std::stable_sort(out.begin(), out.end(), [&](Vertex a, Vertex b) {
    double la = rho.log_weight(a), lb = rho.log_weight(b);
    return la != lb ? la > lb : a < b;
  });
  return out;
}

// The measure with mu(x)/mu(y) = rho(x, y) inside each component.
class RhoMeasure {
 public:
  RhoMeasure() = default;

  // component_mass defaults to vertex-count proportions.
  RhoMeasure(const WeightedGraph& g, const Cocycle& rho, std::vector<double> component_mass = {}) {
    std::size_t nc = g.component_count();
    if (component_mass.empty()) {
      component_mass.resize(nc);
      for (std::uint32_t c = 0; c < nc; ++c)
        component_mass[c] = static_cast<double>(g.component_members(c).size()) /
                            static_cast<double>(g.vertex_count());
    }
    cm_ = component_mass;
    atom_.assign(g.vertex_count(), 0.0);
    for (std::uint32_t c = 0; c < nc; ++c) {
      const auto& mem = g.component_members(c);
      std::vector<double> l(mem.size());
      for (std::size_t i = 0; i < mem.size(); ++i) l[i] = rho.log_weight(mem[i]);
      double lse = log_sum_exp(l);
      for (std::size_t i = 0; i < mem.size(); ++i) atom_[mem[i]] = cm_[c] * std::exp(l[i] - lse);
    }
  }

  double atom(Vertex v) const { return atom_[v]; }
  const std::vector<double>& atoms() const { return atom_; }
  const std::vector<double>& component_masses() const { return cm_; }

  double mass(std::span<const Vertex> set) const {
    double s = 0;
    for (Vertex v : set) s += atom_[v];
    return s;
  }

 private:
  std::vector<double> atom_;
  std::vector<double> cm_;
};

inline double sup_norm(std::span<const double> f) {
  double m = 0;
  for (double x : f) m = std::max(m, std::abs(x));
  return m;
}

inline double sup_norm_on(std::span<const double> f, std::span<const Vertex> set) {
  double m = 0;
  for (Vertex v : set) m = std::max(m, std::abs(f[v]));
  return m;
}

inline double integral(std::span<const double> f, const RhoMeasure& mu) {
  double s = 0;
  for (std::size_t v = 0; v < f.size(); ++v) s += f[v] * mu.atom(static_cast<Vertex>(v));
  return s;
}

inline double l1_norm(std::span<const double> f, const RhoMeasure& mu) {
  double s = 0;
  for (std::size_t v = 0; v < f.size(); ++v) s += std::abs(f[v]) * mu.atom(static_cast<Vertex>(v));
  return s;
}

// Running totals for a growing vertex set: mass and f-mass relative to exp(log_ref).
struct SetSummary {
  double log_ref = 0;
  double mass = 0;
  double fmass = 0;
  double max_log = -std::numeric_limits<double>::infinity();
  std::size_t count = 0;

  void add(double lw, double fv) {
    if (count == 0) {
      log_ref = lw;
    } else if (lw > log_ref + 30) {
      double s = std::exp(log_ref - lw);
      mass *= s;
      fmass *= s;
      log_ref = lw;
    }
    double w = std::exp(lw - log_ref);
    mass += w;
    fmass += fv * w;
    max_log = std::max(max_log, lw);
    ++count;
  }

  void merge(const SetSummary& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    double ref = std::max(log_ref, o.log_ref);
    double a = std::exp(log_ref - ref), b = std::exp(o.log_ref - ref);
    mass = mass * a + o.mass * b;
    fmass = fmass * a + o.fmass * b;
    log_ref = ref;
    max_log = std::max(max_log, o.max_log);
    count += o.count;
  }

  double average() const { return fmass / mass; }
  double rho_max_ratio() const { return mass * std::exp(log_ref - max_log); }
  double log_mass() const { return log_ref + std::log(mass); }
};

inline SetSummary summarize(const Cocycle& rho, std::span<const double> f, std::span<const Vertex> set) {
  SetSummary s;
  for (Vertex v : set) s.add(rho.log_weight(v), f.empty() ? 0.0 : f[v]);
  return s;
}

}  // namespace ergodic
