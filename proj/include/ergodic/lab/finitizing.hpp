#pragma once

#include <vector>

#include "../prepartitions.hpp"
#include "../visibility.hpp"

namespace ergodic::lab {

struct VisibilityReport {
  double p = 0;                        // λ / ||f||∞
  bool packed = false;                 // no p-pack found within S(f, λ, L)
  bool exhaustive = false;
  std::vector<VertexSet> components;   // components of G minus dom(P)
  std::vector<double> block_ratio;     // largest 1-block ρ^max per component
  std::vector<std::size_t> flagged;    // indices with block ratio ≥ L
  double max_block_ratio = 0;
};

// Off-domain visibility. The largest 1-block of a finite component is the block of its
// ρ-maximal vertex, which is the whole component.
inline VisibilityReport finitizing_visibility_check(const Instance& in, const Prepartition& P, double lambda, double L,
                                                    const SearchBudget& budget = {}) {
  VisibilityReport r;
  double sup = sup_norm(in.f);
  r.p = sup > 0 ? lambda / sup : 1.0;
  CentralFamily fam(lambda, L);
  auto search = find_pack(in, fam, P, r.p, budget);
  r.packed = !search.pack.has_value();
  r.exhaustive = search.exhaustive;

  VertexSet off;
  for (Vertex v = 0; v < in.graph.vertex_count(); ++v)
    if (!P.in_domain(v)) off.push_back(v);
  r.components = induced_components(in.graph, off);
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    const auto& c = r.components[i];
    Vertex top = max_rho_vertex(in.rho, c);
    double ratio = in.rho.relative_mass(c, in.rho.log_weight(top));
    r.block_ratio.push_back(ratio);
    r.max_block_ratio = std::max(r.max_block_ratio, ratio);
    if (ratio >= L) r.flagged.push_back(i);
  }
  return r;
}

}  // namespace ergodic::lab
