#include <gtest/gtest.h>

#include "support.hpp"

using namespace ergodic;

namespace {

Cocycle weights(std::initializer_list<double> w) {
  std::vector<double> lw;
  for (double x : w) lw.push_back(std::log(x));
  return Cocycle(lw);
}

// Threshold component by union-find over edges whose ends both pass.
VertexSet block_oracle(const WeightedGraph& g, const Cocycle& rho, Vertex x, double alpha) {
  double cap = rho.log_weight(x) + std::log(alpha);
  std::size_t n = g.vertex_count();
  DisjointSets ds(n);
  for (auto [a, b] : g.edges())
    if (rho.log_weight(a) <= cap && rho.log_weight(b) <= cap) ds.unite(a, b);
  VertexSet out;
  for (Vertex v = 0; v < n; ++v)
    if (ds.find(v) == ds.find(x)) out.push_back(v);
  return out;
}

// Some path from a to b, by breadth-first search.
std::vector<Vertex> any_path(const WeightedGraph& g, Vertex a, Vertex b) {
  std::vector<Vertex> prev(g.vertex_count(), static_cast<Vertex>(-1));
  std::vector<Vertex> queue{a};
  prev[a] = a;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Vertex u : g.neighbors(queue[h]))
      if (prev[u] == static_cast<Vertex>(-1)) prev[u] = queue[h], queue.push_back(u);
  std::vector<Vertex> path{b};
  while (path.back() != a) path.push_back(prev[path.back()]);
  return path;
}

struct Random {
  WeightedGraph g;
  Cocycle rho;
};

Random random_graph(oracle::Rng& rng, std::size_t n, bool coarse) {
  auto g = build_graph(n, oracle::random_connected_edges(rng, n, oracle::pick(rng, 0, n)));
  std::vector<double> lw(n);
  for (double& x : lw) x = coarse ? static_cast<double>(oracle::pick(rng, 0, 3)) : oracle::uniform(rng, -3, 3);
  return {std::move(g), Cocycle(lw)};
}

}  // namespace

TEST(Block, PathExamples) {
  auto g = path_graph(3);
  auto rho = weights({1, 3, 1});
  EXPECT_EQ(block(g, rho, 0, 1.0).vertices, (VertexSet{0}));
  EXPECT_EQ(block(g, rho, 1, 1.0).vertices, (VertexSet{0, 1, 2}));
  EXPECT_EQ(block(g, rho, 0, 3.0).vertices, (VertexSet{0, 1, 2}));
  EXPECT_EQ(block(g, Cocycle::trivial(3), 2, 1.0).vertices, (VertexSet{0, 1, 2}));
  try {
    block(g, rho, 0, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadMagnification);
  }
}

TEST(Block, FrontierFlag) {
  auto g = path_graph(4);
  std::vector<char> frontier{0, 0, 0, 1};
  EXPECT_TRUE(block(g, Cocycle::trivial(4), 0, 1.0, frontier).touches_frontier);
  EXPECT_FALSE(block(g, weights({1, 1, 5, 1}), 0, 1.0, frontier).touches_frontier);
}

TEST(Block, MatchesThresholdOracleAndIsIdempotent) {
  oracle::Rng rng(41);
  for (int t = 0; t < 300; ++t) {
    auto m = random_graph(rng, oracle::pick(rng, 1, 50), false);
    Vertex x = static_cast<Vertex>(oracle::pick(rng, 0, m.g.vertex_count() - 1));
    double alpha = std::exp(oracle::uniform(rng, 0, 2));
    auto b = block(m.g, m.rho, x, alpha);
    EXPECT_EQ(b.vertices, block_oracle(m.g, m.rho, x, alpha));
    EXPECT_TRUE(is_connected_set(m.g, b.vertices));
    for (Vertex y : b.vertices) {
      double beta = alpha * m.rho.rho(x, y);
      if (beta < 1) beta = 1;  // rounding at the cap
      EXPECT_TRUE(is_subset(b.vertices, block(m.g, m.rho, y, beta * (1 + 1e-12)).vertices));
    }
  }
}

TEST(Nesting, Examples) {
  auto g = path_graph(3);
  auto rho = weights({1, 3, 1});
  auto left = block(g, rho, 0, 1.0), right = block(g, rho, 2, 1.0), mid = block(g, rho, 1, 1.0);
  EXPECT_EQ(nested_or_disjoint_check(left, left), BlockRelation::Equal);
  EXPECT_EQ(nested_or_disjoint_check(left, right), BlockRelation::Disjoint);
  EXPECT_EQ(nested_or_disjoint_check(left, mid), BlockRelation::FirstInsideSecond);
  EXPECT_EQ(nested_or_disjoint_check(mid, right), BlockRelation::SecondInsideFirst);
  Block a{{0, 1}, 0, 1.0}, b{{1, 2}, 2, 1.0};
  try {
    nested_or_disjoint_check(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvariantBreach);
  }
}

TEST(Nesting, AllPairsOfUnitBlocks) {
  oracle::Rng rng(42);
  for (int t = 0; t < 100; ++t) {
    auto m = random_graph(rng, oracle::pick(rng, 1, 50), t % 2 == 0);
    std::size_t n = m.g.vertex_count();
    std::vector<Block> blocks;
    for (Vertex x = 0; x < n; ++x) blocks.push_back(block(m.g, m.rho, x, 1.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) EXPECT_NO_THROW(nested_or_disjoint_check(blocks[i], blocks[j]));
  }
}

TEST(Amalgamation, PathMaximumSeesBoth) {
  oracle::Rng rng(43);
  for (int t = 0; t < 500; ++t) {
    auto m = random_graph(rng, oracle::pick(rng, 1, 50), t % 3 == 0);
    std::size_t n = m.g.vertex_count();
    Vertex x = static_cast<Vertex>(oracle::pick(rng, 0, n - 1)), y = static_cast<Vertex>(oracle::pick(rng, 0, n - 1));
    double a = std::exp(oracle::uniform(rng, 0, 1.5)), b = std::exp(oracle::uniform(rng, 0, 1.5));
    auto path = any_path(m.g, x, y);
    Vertex z = max_rho_vertex(m.rho, make_set(path));
    auto big = block(m.g, m.rho, z, std::max(a, b));
    EXPECT_TRUE(is_subset(block(m.g, m.rho, x, a).vertices, big.vertices));
    EXPECT_TRUE(is_subset(block(m.g, m.rho, y, b).vertices, big.vertices));
  }
}

TEST(NextBlock, Examples) {
  auto g = path_graph(3);
  auto rho = weights({1, 3, 1});
  EXPECT_EQ(next_block(g, rho, block(g, rho, 0, 1.0)).vertices, (VertexSet{0, 1, 2}));
  try {
    next_block(g, rho, block(g, rho, 1, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoNextBlock);
  }
  auto star = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  auto srho = weights({10, 1, 1, 1, 1});
  EXPECT_EQ(next_block(star, srho, block(star, srho, 3, 1.0)).vertices, (VertexSet{0, 1, 2, 3, 4}));
}

TEST(NextBlock, AnyMinimalBoundaryVertexGivesTheSameBlock) {
  oracle::Rng rng(44);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    auto m = random_graph(rng, oracle::pick(rng, 2, 40), true);
    Vertex x = static_cast<Vertex>(oracle::pick(rng, 0, m.g.vertex_count() - 1));
    auto b = block(m.g, m.rho, x, 1.0);
    auto bd = outer_boundary(m.g, b.vertices);
    if (bd.empty()) continue;
    auto next = next_block(m.g, m.rho, b);
    EXPECT_TRUE(is_subset(b.vertices, next.vertices));
    EXPECT_GT(next.vertices.size(), b.vertices.size());
    double lo = INFINITY;
    for (Vertex y : bd) lo = std::min(lo, m.rho.log_weight(y));
    for (Vertex y : bd)
      if (m.rho.log_weight(y) == lo) {
        EXPECT_EQ(block(m.g, m.rho, y, 1.0).vertices, next.vertices);
        ++checked;
      }
    // least: no 1-block strictly between b and next
    for (Vertex v : next.vertices) {
      auto c = block(m.g, m.rho, v, 1.0);
      bool between = is_subset(b.vertices, c.vertices) && c.vertices.size() > b.vertices.size() &&
                     is_subset(c.vertices, next.vertices) && c.vertices.size() < next.vertices.size();
      EXPECT_FALSE(between);
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(Dominus, Examples) {
  auto g = path_graph(3);
  auto rho = weights({1, 3, 1});
  EXPECT_EQ(dominus_step(g, rho, 0), 1u);
  EXPECT_EQ(dominus_step(g, rho, 1), 1u);
  auto lonely = build_graph(2, std::vector<std::pair<Vertex, Vertex>>{});
  EXPECT_EQ(dominus_step(lonely, Cocycle::trivial(2), 1), 1u);
  auto c = cycle_graph(6);
  for (Vertex v = 0; v < 6; ++v) EXPECT_EQ(dominus_step(c, Cocycle::trivial(6), v), 0u);
}

TEST(OrbitMerge, Examples) {
  auto c = cycle_graph(7);
  auto r = orbit_merge_test(c, Cocycle::trivial(7));
  EXPECT_TRUE(r.merged);
  EXPECT_EQ(r.terminal, (std::vector<Vertex>{0}));

  auto two = build_graph(5, {{0, 1}, {2, 3}, {3, 4}});
  auto r2 = orbit_merge_test(two, weights({1, 2, 5, 1, 5}));
  EXPECT_TRUE(r2.merged);
  EXPECT_EQ(r2.terminal, (std::vector<Vertex>{1, 2}));
}

TEST(OrbitMerge, RandomGraphsAndTrees) {
  oracle::Rng rng(45);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = oracle::pick(rng, 1, 50);
    auto edges = oracle::random_connected_edges(rng, n, t % 2 ? 0 : n / 2);
    std::vector<double> lw(n);
    for (double& x : lw) x = t % 3 ? oracle::uniform(rng, -3, 3) : static_cast<double>(oracle::pick(rng, 0, 2));
    auto g = build_graph(n, edges);
    Cocycle rho(lw);
    auto r = orbit_merge_test(g, rho);
    EXPECT_TRUE(r.merged);
    // the fixpoint is the selector's choice on the whole component
    EXPECT_EQ(r.terminal[0], max_rho_vertex(rho, g.component_members(0)));
  }
}

TEST(Cone, Examples) {
  auto g = path_graph(3);
  auto rho = weights({1, 3, 1});
  EXPECT_EQ(cone(g, rho, 1), (VertexSet{1}));
  EXPECT_EQ(cone(g, rho, 0), (VertexSet{0, 1}));
  EXPECT_EQ(cone(g, Cocycle::trivial(3), 0), (VertexSet{0, 1, 2}));
}

TEST(Cone, LawsAndDualScan) {
  oracle::Rng rng(46);
  for (int t = 0; t < 200; ++t) {
    auto m = random_graph(rng, oracle::pick(rng, 1, 40), t % 2 == 0);
    std::size_t n = m.g.vertex_count();
    std::vector<VertexSet> cones(n);
    for (Vertex x = 0; x < n; ++x) {
      cones[x] = cone(m.g, m.rho, x);
      EXPECT_EQ(cones[x], cone_dual_scan(m.g, m.rho, x));
      EXPECT_TRUE(std::binary_search(cones[x].begin(), cones[x].end(), x));
      double top = m.rho.max_log_weight(m.g.component_members(m.g.component(x)));
      EXPECT_EQ(m.rho.max_log_weight(cones[x]), top);
    }
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y : cones[x]) EXPECT_TRUE(is_subset(cones[y], cones[x]));
  }
}
