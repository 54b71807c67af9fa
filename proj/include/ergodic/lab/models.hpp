#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "../cocycle.hpp"

namespace ergodic::lab {

enum class ModelKind { Rotation, Odometer, Bernoulli, FreeTree, RandomRegular };

inline const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Rotation: return "rotation";
    case ModelKind::Odometer: return "odometer";
    case ModelKind::Bernoulli: return "bernoulli";
    case ModelKind::FreeTree: return "free_tree";
    case ModelKind::RandomRegular: return "random_regular";
  }
  return "?";
}

inline ModelKind parse_kind(const std::string& s) {
  for (auto k : {ModelKind::Rotation, ModelKind::Odometer, ModelKind::Bernoulli, ModelKind::FreeTree,
                 ModelKind::RandomRegular})
    if (s == kind_name(k)) return k;
  throw Error(ErrorKind::BadModel, "unknown model kind '" + s + "'");
}

// n is the point count (rotation, random_regular), the string length (odometer, bernoulli)
// or the depth (free_tree).
struct ModelSpec {
  ModelKind kind = ModelKind::Rotation;
  std::size_t n = 1024;
  double p = 0.5;
  double q = 0.5;
  std::size_t degree = 3;
  std::uint64_t seed = 1;
};

struct ModelInstance {
  WeightedGraph graph;
  Cocycle cocycle;
  RhoMeasure measure;
  std::vector<double> f;
  std::vector<char> frontier;        // vertices where the truncation cuts the infinite graph
  std::vector<std::uint32_t> ones;   // bernoulli/odometer: number of 1 digits, for exact weights
};

namespace detail {

inline ModelInstance finish(WeightedGraph g, std::vector<double> lw, std::vector<double> f,
                            std::vector<char> frontier = {}) {
  ModelInstance m;
  m.graph = std::move(g);
  m.cocycle = Cocycle(std::move(lw));
  m.measure = RhoMeasure(m.graph, m.cocycle);
  m.f = std::move(f);
  m.frontier = frontier.empty() ? std::vector<char>(m.graph.vertex_count(), 0) : std::move(frontier);
  return m;
}

inline void check_probability(double p, const char* name) {
  if (!(p > 0 && p < 1)) throw Error(ErrorKind::BadModel, std::string(name) + " must lie in (0,1)");
}

inline std::vector<double> centered(std::vector<double> f, const RhoMeasure& mu) {
  double m = integral(f, mu);
  for (double& x : f) x -= m;
  return f;
}

}  // namespace detail

// Orbit of an irrational rotation on a cycle; f is the centered indicator of [0, 1/2).
inline ModelInstance rotation_model(std::size_t n, double alpha = (std::sqrt(5.0) - 1) / 2) {
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::fmod(static_cast<double>(i) * alpha, 1.0);
    f[i] = x < 0.5 ? 1.0 : 0.0;
  }
  auto m = detail::finish(cycle_graph(n), std::vector<double>(n, 0.0), std::move(f));
  m.f = detail::centered(std::move(m.f), m.measure);
  return m;
}

// Integers 0..2^d-1 joined by +1 with carry; weights from the product measure with bias p.
inline ModelInstance odometer_model(std::size_t d, double p = 0.5) {
  detail::check_probability(p, "p");
  std::size_t n = std::size_t{1} << d;
  std::vector<double> lw(n), f(n);
  std::vector<std::uint32_t> ones(n);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t x = 0; x < n; ++x) {
    ones[x] = static_cast<std::uint32_t>(std::popcount(x));
    lw[x] = ones[x] * std::log(p) + (d - ones[x]) * std::log(1 - p);
    f[x] = static_cast<double>(x & 1);
    if (x + 1 < n) e.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(x + 1));
  }
  std::vector<char> frontier(n, 0);
  frontier[0] = frontier[n - 1] = 1;
  auto m = detail::finish(build_graph(n, e), std::move(lw), std::move(f), std::move(frontier));
  m.ones = std::move(ones);
  m.f = detail::centered(std::move(m.f), m.measure);
  return m;
}

// Binary strings of length d, adjacent when they differ in one coordinate.
// w(x) = Π (p/q)^{x_i} ((1-p)/(1-q))^{1-x_i}; f is the centered indicator of x_0 = 1.
inline ModelInstance bernoulli_model(std::size_t d, double p, double q) {
  detail::check_probability(p, "p");
  detail::check_probability(q, "q");
  std::size_t n = std::size_t{1} << d;
  double l1 = std::log(p / q), l0 = std::log((1 - p) / (1 - q));
  std::vector<double> lw(n), f(n);
  std::vector<std::uint32_t> ones(n);
  std::vector<std::pair<Vertex, Vertex>> e;
  for (std::size_t x = 0; x < n; ++x) {
    ones[x] = static_cast<std::uint32_t>(std::popcount(x));
    lw[x] = p == q ? 0.0 : ones[x] * l1 + (d - ones[x]) * l0;
    f[x] = static_cast<double>(x & 1);
    for (std::size_t i = 0; i < d; ++i) {
      std::size_t y = x ^ (std::size_t{1} << i);
      if (x < y) e.emplace_back(static_cast<Vertex>(x), static_cast<Vertex>(y));
    }
  }
  auto m = detail::finish(build_graph(n, e), std::move(lw), std::move(f));
  m.ones = std::move(ones);
  m.f = detail::centered(std::move(m.f), m.measure);
  return m;
}

// Ball of radius `depth` in the 4-regular tree; f is a seeded fair coin.
inline ModelInstance free_tree_model(std::size_t depth, std::uint64_t seed) {
  std::vector<std::pair<Vertex, Vertex>> e;
  std::vector<Vertex> level{0};
  Vertex next = 1;
  for (std::size_t r = 0; r < depth; ++r) {
    std::vector<Vertex> nl;
    for (Vertex v : level) {
      int kids = v == 0 ? 4 : 3;
      for (int k = 0; k < kids; ++k) {
        e.emplace_back(v, next);
        nl.push_back(next++);
      }
    }
    level = std::move(nl);
  }
  std::size_t n = next;
  std::mt19937_64 rng(seed);
  std::vector<double> f(n);
  for (auto& x : f) x = static_cast<double>(rng() & 1);
  std::vector<char> frontier(n, 0);
  if (depth > 0)
    for (Vertex v : level) frontier[v] = 1;
  auto m = detail::finish(build_graph(n, e), std::vector<double>(n, 0.0), std::move(f), std::move(frontier));
  m.f = detail::centered(std::move(m.f), m.measure);
  return m;
}

// Configuration-model d-regular simple graph, retried until simple.
inline ModelInstance random_regular_model(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (degree == 0 || degree >= n || (n * degree) % 2) throw Error(ErrorKind::BadModel, "no simple regular graph");
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Vertex> stubs;
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t k = 0; k < degree; ++k) stubs.push_back(static_cast<Vertex>(v));
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<std::pair<Vertex, Vertex>> e;
    bool ok = true;
    for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
      Vertex a = std::min(stubs[i], stubs[i + 1]), b = std::max(stubs[i], stubs[i + 1]);
      if (a == b) ok = false;
      e.emplace_back(a, b);
    }
    if (!ok) continue;
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end()) continue;
    std::vector<double> f(n);
    for (auto& x : f) x = static_cast<double>(rng() & 1);
    auto m = detail::finish(build_graph(n, e), std::vector<double>(n, 0.0), std::move(f));
    m.f = detail::centered(std::move(m.f), m.measure);
    return m;
  }
  throw Error(ErrorKind::BadModel, "could not sample a simple regular graph");
}

inline ModelInstance generate_model(const ModelSpec& s) {
  switch (s.kind) {
    case ModelKind::Rotation: return rotation_model(s.n);
    case ModelKind::Odometer: return odometer_model(s.n, s.p);
    case ModelKind::Bernoulli: return bernoulli_model(s.n, s.p, s.q);
    case ModelKind::FreeTree: return free_tree_model(s.n, s.seed);
    case ModelKind::RandomRegular: return random_regular_model(s.n, s.degree, s.seed);
  }
  throw Error(ErrorKind::BadModel, "unknown kind");
}

}  // namespace ergodic::lab
