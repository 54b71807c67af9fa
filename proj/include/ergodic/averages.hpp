#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "partition.hpp"

namespace ergodic {

// Kernels over explicit weights, usable with exact rationals.
template <class Scalar>
Scalar weighted_sum(std::span<const Scalar> f, std::span<const Scalar> w, std::span<const Vertex> set) {
  Scalar s(0);
  for (Vertex v : set) s += f[v] * w[v];
  return s;
}

template <class Scalar>
Scalar mass_of(std::span<const Scalar> w, std::span<const Vertex> set) {
  Scalar s(0);
  for (Vertex v : set) s += w[v];
  return s;
}

template <class Scalar>
Scalar weighted_average(std::span<const Scalar> f, std::span<const Scalar> w, std::span<const Vertex> set) {
  if (set.empty()) throw Error(ErrorKind::EmptySet, "average over empty set");
  return weighted_sum(f, w, set) / mass_of(w, set);
}

// A_f[x] over the class of x, for every vertex.
template <class Scalar>
std::vector<Scalar> mean_over(std::span<const Scalar> f, std::span<const Scalar> w, const EquivRel& F) {
  std::vector<Scalar> out(f.size());
  for (const auto& c : F.classes()) {
    Scalar a = weighted_average(f, w, std::span<const Vertex>(c));
    for (Vertex v : c) out[v] = a;
  }
  return out;
}

inline double weighted_average(std::span<const double> f, const Cocycle& rho, std::span<const Vertex> set) {
  if (set.empty()) throw Error(ErrorKind::EmptySet, "average over empty set");
  return summarize(rho, f, set).average();
}

inline std::vector<double> mean_over(std::span<const double> f, const Cocycle& rho, const EquivRel& F) {
  std::vector<double> out(f.size());
  for (const auto& c : F.classes()) {
    double a = weighted_average(f, rho, c);
    for (Vertex v : c) out[v] = a;
  }
  return out;
}

struct UnionIdentity {
  double average_union = 0;   // A[U ∪ V]
  double convex_form = 0;     // (ρU A[U] + ρV A[V]) / (ρU + ρV)
  double drift = 0;           // |A[U ∪ V] - A[U]|
  double drift_bound = 0;     // 2 ||f||∞ ρV / (ρU + ρV)
  double identity_error() const { return std::abs(average_union - convex_form); }
  bool holds(double tol) const { return identity_error() <= tol && drift <= drift_bound + tol; }
};

inline UnionIdentity union_identity_check(std::span<const double> f, const Cocycle& rho, std::span<const Vertex> u,
                                          std::span<const Vertex> v) {
  if (u.empty() || v.empty()) throw Error(ErrorKind::EmptySet, "union identity needs nonempty sets");
  if (sets_intersect(u, v)) throw Error(ErrorKind::NotDisjoint, "U and V intersect");
  VertexSet uv = set_union(u, v);
  double ref = rho.max_log_weight(uv);
  double ru = rho.relative_mass(u, ref), rv = rho.relative_mass(v, ref);
  double au = weighted_average(f, rho, u), av = weighted_average(f, rho, v);
  UnionIdentity r;
  r.average_union = weighted_average(f, rho, uv);
  r.convex_form = (ru * au + rv * av) / (ru + rv);
  r.drift = std::abs(r.average_union - au);
  r.drift_bound = 2 * sup_norm_on(f, uv) * rv / (ru + rv);
  return r;
}

// Classes whose |average| is at most ||f||_1 / eps; mass at least 1 - eps.
inline VertexSet chebyshev_restriction(std::span<const double> f, const Cocycle& rho, const EquivRel& F,
                                       const RhoMeasure& mu, double eps) {
  double threshold = l1_norm(f, mu) / eps;
  VertexSet out;
  for (const auto& c : F.classes())
    if (std::abs(weighted_average(f, rho, c)) <= threshold) out.insert(out.end(), c.begin(), c.end());
  return make_set(std::move(out));
}

struct GrowthResult {
  VertexSet set;
  double average = 0;
  double paper_delta = 0;  // ||f|(V\U)||∞ · maxρ(V\U) / ρ(U)
  double sound_delta = 0;  // ||f|V||∞ · maxρ(V\U) / ρ(U)
};

// Grows U inside V one adjacent vertex at a time, each step taking the vertex whose
// addition lands nearest r (smaller id on ties); returns the prefix nearest r.
inline GrowthResult intermediate_value_grow(std::span<const double> f, const WeightedGraph& g, const Cocycle& rho,
                                            std::span<const Vertex> u, std::span<const Vertex> v, double r) {
  if (u.empty()) throw Error(ErrorKind::EmptySet, "U is empty");
  if (!is_subset(u, v) || !is_connected_set(g, u) || !is_connected_set(g, v))
    throw Error(ErrorKind::BadArgument, "need connected U inside connected V");
  double au = weighted_average(f, rho, u), av = weighted_average(f, rho, v);
  if (r < std::min(au, av) || r > std::max(au, av))
    throw Error(ErrorKind::TargetOutOfRange, "r outside [A[U], A[V]]");

  VertexSet rest = set_difference(v, u);
  GrowthResult res;
  double ref = rho.max_log_weight(v);
  double ru = rho.relative_mass(u, ref);
  double maxw = rest.empty() ? 0.0 : std::exp(rho.max_log_weight(rest) - ref);
  res.paper_delta = sup_norm_on(f, rest) * maxw / ru;
  res.sound_delta = sup_norm_on(f, v) * maxw / ru;

  std::vector<char> in_w(g.vertex_count(), 0), in_v(g.vertex_count(), 0);
  for (Vertex x : v) in_v[x] = 1;
  for (Vertex x : u) in_w[x] = 1;
  double mass = ru, fmass = 0;
  for (Vertex x : u) fmass += f[x] * std::exp(rho.log_weight(x) - ref);

  std::vector<Vertex> order;
  double best_dist = std::abs(au - r);
  std::size_t best_len = 0;
  VertexSet frontier = outer_boundary(g, u);
  std::erase_if(frontier, [&](Vertex x) { return !in_v[x]; });
  while (!frontier.empty()) {
    Vertex pick = frontier.front();
    double pick_dist = INFINITY;
    for (Vertex x : frontier) {
      double w = std::exp(rho.log_weight(x) - ref);
      double d = std::abs((fmass + f[x] * w) / (mass + w) - r);
      if (d < pick_dist) pick_dist = d, pick = x;
    }
    double w = std::exp(rho.log_weight(pick) - ref);
    mass += w;
    fmass += f[pick] * w;
    in_w[pick] = 1;
    order.push_back(pick);
    if (pick_dist < best_dist) best_dist = pick_dist, best_len = order.size();
    std::erase(frontier, pick);
    for (Vertex y : g.neighbors(pick))
      if (in_v[y] && !in_w[y] && !std::binary_search(frontier.begin(), frontier.end(), y))
        frontier.insert(std::lower_bound(frontier.begin(), frontier.end(), y), y);
  }
  res.set.assign(u.begin(), u.end());
  res.set.insert(res.set.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_len));
  res.set = make_set(std::move(res.set));
  res.average = weighted_average(f, rho, res.set);
  return res;
}

enum class Sign { Negative, Central, Positive };

inline Sign lambda_classify(double average, double lambda) {
  if (average <= -lambda) return Sign::Negative;
  if (average >= lambda) return Sign::Positive;
  return Sign::Central;
}

inline Sign lambda_classify(std::span<const double> f, const Cocycle& rho, std::span<const Vertex> set, double lambda) {
  return lambda_classify(weighted_average(f, rho, set), lambda);
}

// U in S(f, λ, L, F): F-invariant, connected, λ-central, ρ^max in the quotient by F at least L.
inline bool family_S_membership(std::span<const double> f, const WeightedGraph& g, const Cocycle& rho,
                                const EquivRel& F, double lambda, double L, std::span<const Vertex> set) {
  if (set.empty() || !F.is_invariant(set) || !is_connected_set(g, set)) return false;
  SetSummary s = summarize(rho, f, set);
  if (lambda_classify(s.average(), lambda) != Sign::Central) return false;
  double max_class = -INFINITY;
  for (Vertex v : set) {
    const auto& c = F.class_members(F.class_of(v));
    if (c.front() == v) max_class = std::max(max_class, summarize(rho, f, c).log_mass());
  }
  return std::exp(s.log_mass() - max_class) >= L;
}

}  // namespace ergodic
