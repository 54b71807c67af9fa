#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "../averages.hpp"
#include "../prepartitions.hpp"
#include "models.hpp"

namespace ergodic::lab {

struct Reduction {
  std::vector<double> g;
  double level = 0;  // clipping level
  double tail = 0;   // ||f - g||_1
};

// Clips |f| at the smallest of its own magnitudes whose L1 tail stays below (ε/2)².
inline Reduction linf_reduction(std::span<const double> f, const RhoMeasure& mu, double eps) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::BadArgument, "eps must lie in (0,1)");
  double budget = (eps / 2) * (eps / 2);
  std::vector<Vertex> order(f.size());
  std::iota(order.begin(), order.end(), Vertex{0});
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return std::abs(f[a]) > std::abs(f[b]); });
  // walk levels downward: tail(T) = Σ_{|f|>T} μ (|f| - T)
  double level = order.empty() ? 0.0 : std::abs(f[order.front()]);
  double above_mass = 0, above_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    double t = std::abs(f[order[i]]);
    if (above_sum - t * above_mass >= budget) break;
    level = t;
    for (; i < order.size() && std::abs(f[order[i]]) == t; ++i) {
      above_mass += mu.atom(order[i]);
      above_sum += mu.atom(order[i]) * t;
    }
  }
  Reduction r{std::vector<double>(f.begin(), f.end()), level, 0};
  for (std::size_t v = 0; v < f.size(); ++v) {
    r.g[v] = std::clamp(f[v], -level, level);
    r.tail += mu.atom(static_cast<Vertex>(v)) * std::abs(f[v] - r.g[v]);
  }
  return r;
}

inline double cutting_one_side_delta(double eps, double sup) { return eps * eps / (sup + 1); }

struct Schedule {
  double delta, sup;
  double lambda(std::size_t n) const { return delta * std::pow(3.0, -static_cast<double>(n)); }
  double L(std::size_t n) const { return std::pow(4.0, static_cast<double>(n)); }
  double p(std::size_t n) const { return lambda(n + 2) / (sup + lambda(n + 1)); }
};

struct StageStats {
  std::size_t stage = 0;
  double eps = 0;
  double mass_within_eps = 0;
  std::size_t max_tile = 0;
  double mean_tile = 0;
  double wall_ms = 0;
  // not in the CSV
  double lambda = 0, L = 0, p = 0;
  double covered_mass = 0;
  double frontier_mass = 0;
  double mean_drift = 0;  // |∫ A_f[F_n] dμ - ∫ f dμ|
  std::size_t new_cells = 0;
  std::map<std::size_t, std::size_t> histogram;  // tile size -> count, non-singleton tiles
};

struct StallDiagnostic {
  std::size_t stage = 0;
  std::vector<std::uint32_t> components;
  std::size_t room_violations = 0;  // cells P with ρ(P \ [S]) < (2/13) ρ([S] ∩ P)
};

struct ConvergenceReport {
  std::vector<StageStats> stages;
  std::vector<StallDiagnostic> stalls;
  bool success = false;
  double target = 0;
  double delta = 0;
  double truncation_level = 0;
};

struct TilingState {
  std::vector<Prepartition> prepartitions;
  EquivRel relation;
};

struct TilingOptions {
  SearchBudget budget;
  std::size_t max_candidate_classes = 4096;
  bool timing = true;
};

namespace detail {

inline void audit_relation(const WeightedGraph& g, const EquivRel& F) {
  for (const auto& c : F.classes())
    if (c.size() > 1 && !is_connected_set(g, c))
      throw Error(ErrorKind::InvariantBreach, "tile at " + std::to_string(c.front()) + " is not connected");
}

// Finite echo of the room-for-flow bound on stalled components.
inline std::size_t room_violations(const WeightedGraph& g, const Cocycle& rho, const EquivRel& prev,
                                   const Prepartition& cells, const std::vector<char>& covered,
                                   const std::vector<char>& stalled_comp) {
  std::vector<char> in_s(g.vertex_count(), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (!covered[v] || !stalled_comp[g.component(v)]) continue;
    for (Vertex u : g.neighbors(v))
      if (!covered[u]) in_s[v] = 1;
  }
  std::size_t bad = 0;
  for (const auto& P : cells.cells()) {
    if (!stalled_comp[g.component(P.front())]) continue;
    VertexSet inside, outside;
    for (Vertex v : P) {
      bool touches = false;
      for (Vertex u : prev.class_members(prev.class_of(v))) touches |= in_s[u] != 0;
      (touches ? inside : outside).push_back(v);
    }
    if (inside.empty()) continue;
    double ref = rho.max_log_weight(P);
    if (rho.relative_mass(outside, ref) < (2.0 / 13.0) * rho.relative_mass(inside, ref)) ++bad;
  }
  return bad;
}

}  // namespace detail

// Coherent packed-and-saturated prepartitions in successive quotients, stopping once the
// interior mass with tile average within ε of ∫f reaches 1 - ε.
inline std::pair<TilingState, ConvergenceReport> run_tiling(const ModelInstance& m, double eps,
                                                            std::size_t max_stages = 12,
                                                            const TilingOptions& opt = {}) {
  const auto& g = m.graph;
  const auto& rho = m.cocycle;
  const auto& mu = m.measure;
  std::size_t n = g.vertex_count();

  ConvergenceReport rep;
  rep.target = integral(m.f, mu);
  std::vector<double> centered(m.f);
  for (double& x : centered) x -= rep.target;
  Reduction red = linf_reduction(centered, mu, eps);
  double shift = integral(red.g, mu);
  for (double& x : red.g) x -= shift;
  Schedule sched{cutting_one_side_delta(eps, sup_norm(red.g)), sup_norm(red.g)};
  rep.delta = sched.delta;
  rep.truncation_level = red.level;

  TilingState st{{}, EquivRel::identity(n)};
  std::vector<char> covered(n, 0);
  double covered_mass = 0;

  for (std::size_t k = 1; k <= max_stages; ++k) {
    auto t0 = std::chrono::steady_clock::now();
    StageStats s;
    s.stage = k;
    s.eps = eps;
    s.lambda = sched.lambda(k);
    s.L = sched.L(k);
    s.p = sched.p(k);

    QuotientModel q = quotient(g, rho, red.g, st.relation);
    Instance qi{q.graph, q.cocycle, q.function};
    CentralFamily fam(s.lambda, s.L);
    SearchBudget b = opt.budget;
    b.max_classes = std::max(b.max_classes, std::min(opt.max_candidate_classes, static_cast<std::size_t>(2 * s.L)));
    Prepartition qp = packed_and_saturated(qi, fam, s.p, b).partition;

    std::vector<VertexSet> cells;
    for (const auto& c : qp.cells()) cells.push_back(lift(q.relation, c));
    Prepartition P(n, std::move(cells));
    for (const auto& c : P.cells())
      if (!st.relation.is_invariant(c)) throw Error(ErrorKind::NotCoherent, "stage cell splits an earlier tile");
    EquivRel prev = st.relation;
    st.relation = join(st.relation, EquivRel::of(P));
    st.prepartitions.push_back(P);
    detail::audit_relation(g, st.relation);
    s.new_cells = P.size();

    for (const auto& c : P.cells())
      for (Vertex v : c) covered[v] = 1;
    double new_covered = 0;
    for (Vertex v = 0; v < n; ++v)
      if (covered[v]) new_covered += mu.atom(v);

    // statistics over tiles of F_k
    double interior = 0, good = 0, frontier_mass = 0, drift = 0;
    std::size_t tiles = 0, tile_total = 0;
    for (const auto& c : st.relation.classes()) {
      double a = weighted_average(m.f, rho, c);
      double mass = mu.mass(c);
      drift += a * mass;
      if (c.size() > 1) {
        ++tiles;
        tile_total += c.size();
        ++s.histogram[c.size()];
        s.max_tile = std::max(s.max_tile, c.size());
      }
      bool edge = false;
      for (Vertex v : c) edge |= m.frontier[v] != 0;
      if (edge) {
        frontier_mass += mass;
        continue;
      }
      interior += mass;
      if (std::abs(a - rep.target) <= eps) good += mass;
    }
    s.mass_within_eps = interior > 0 ? good / interior : 0.0;
    s.mean_tile = tiles ? static_cast<double>(tile_total) / static_cast<double>(tiles) : 0.0;
    s.frontier_mass = frontier_mass;
    s.covered_mass = new_covered;
    s.mean_drift = std::abs(drift - rep.target);

    if (new_covered <= covered_mass) {
      StallDiagnostic d{k, {}, 0};
      std::vector<char> stalled(g.component_count(), 0);
      for (std::uint32_t c = 0; c < g.component_count(); ++c)
        for (Vertex v : g.component_members(c))
          if (!covered[v]) {
            stalled[c] = 1;
            d.components.push_back(c);
            break;
          }
      d.room_violations = detail::room_violations(g, rho, prev, P, covered, stalled);
      rep.stalls.push_back(std::move(d));
    }
    covered_mass = new_covered;
    if (opt.timing)
      s.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rep.stages.push_back(s);
    if (s.mass_within_eps >= 1 - eps) {
      rep.success = true;
      break;
    }
  }
  return {std::move(st), std::move(rep)};
}

struct RatioReport {
  ConvergenceReport tiling;
  double target = 0;                    // ∫f dμ / ∫g dμ
  std::vector<double> tile_ratio;       // per vertex, final stage
};

// Tiles under σ(x,y) = g(x)ρ(x,y)/g(y) with the function f/g; the statistic Σ fρ / Σ gρ per tile
// equals the σ-average of f/g.
inline RatioReport ratio_experiment(const ModelInstance& m, std::span<const double> f, std::span<const double> gfun,
                                    double eps, std::size_t max_stages = 12, const TilingOptions& opt = {}) {
  std::size_t n = m.graph.vertex_count();
  for (std::size_t v = 0; v < n; ++v)
    if (!(gfun[v] > 0)) throw Error(ErrorKind::BadDenominator, "g <= 0 at vertex " + std::to_string(v));
  ModelInstance r;
  r.graph = m.graph;
  std::vector<double> lw(n);
  std::vector<double> comp_mass(m.graph.component_count(), 0.0);
  for (Vertex v = 0; v < n; ++v) {
    lw[v] = m.cocycle.log_weight(v) + std::log(gfun[v]);
    comp_mass[m.graph.component(v)] += gfun[v] * m.measure.atom(v);
  }
  double total = 0;
  for (double c : comp_mass) total += c;
  for (double& c : comp_mass) c /= total;
  r.cocycle = Cocycle(std::move(lw));
  r.measure = m.graph.component_count() == 1 ? RhoMeasure(r.graph, r.cocycle) : RhoMeasure(r.graph, r.cocycle, comp_mass);
  r.f.resize(n);
  for (Vertex v = 0; v < n; ++v) r.f[v] = f[v] / gfun[v];
  r.frontier = m.frontier;
  RatioReport out;
  auto [st, rep] = run_tiling(r, eps, max_stages, opt);
  out.target = rep.target;
  out.tiling = std::move(rep);
  out.tile_ratio = mean_over(r.f, r.cocycle, st.relation);
  return out;
}

}  // namespace ergodic::lab
