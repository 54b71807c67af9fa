#pragma once

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "io.hpp"
#include "partition.hpp"

namespace ergodic {

inline constexpr double kFlowTolerance = 1e-12;

// Sparse nonnegative flow on ordered pairs x != y.
template <class Scalar>
class BasicRhoFlow {
 public:
  using Entries = std::map<std::pair<Vertex, Vertex>, Scalar>;

  void set(Vertex x, Vertex y, Scalar value) {
    if (x == y) throw Error(ErrorKind::MalformedFlow, "flow on diagonal pair " + std::to_string(x));
    if (value < Scalar(0)) throw Error(ErrorKind::MalformedFlow, "negative flow on (" + std::to_string(x) + "," + std::to_string(y) + ")");
    if (value == Scalar(0)) entries_.erase({x, y});
    else entries_[{x, y}] = value;
  }
  void add(Vertex x, Vertex y, Scalar value) { set(x, y, get(x, y) + value); }
  Scalar get(Vertex x, Vertex y) const {
    auto it = entries_.find({x, y});
    return it == entries_.end() ? Scalar(0) : it->second;
  }
  const Entries& entries() const { return entries_; }
  Entries& mutable_entries() { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  Entries entries_;
};

using RhoFlow = BasicRhoFlow<double>;

// out(x) and in(y) with explicit weights w (rho(x, y) = w[x] / w[y]).
template <class Scalar>
std::pair<std::vector<Scalar>, std::vector<Scalar>> in_out(const BasicRhoFlow<Scalar>& phi, std::span<const Scalar> w) {
  std::vector<Scalar> out(w.size(), Scalar(0)), in(w.size(), Scalar(0));
  for (const auto& [xy, val] : phi.entries()) {
    out[xy.first] += val;
    in[xy.second] += val * w[xy.first] / w[xy.second];
  }
  return {out, in};
}

template <class Scalar>
void require_closed(const BasicRhoFlow<Scalar>& phi, std::span<const Vertex> u, std::span<const Vertex> v) {
  for (const auto& [xy, val] : phi.entries()) {
    bool xu = std::binary_search(u.begin(), u.end(), xy.first);
    bool yv = std::binary_search(v.begin(), v.end(), xy.second);
    if (xu != yv)
      throw Error(ErrorKind::NotClosed, "pair (" + std::to_string(xy.first) + "," + std::to_string(xy.second) +
                                            ") crosses the U x V boundary");
  }
}

// (∫_U out dρ, ∫_V in dρ), both in the units of w.
template <class Scalar>
std::pair<Scalar, Scalar> balance_sums(const BasicRhoFlow<Scalar>& phi, std::span<const Scalar> w,
                                       std::span<const Vertex> u, std::span<const Vertex> v) {
  require_closed(phi, u, v);
  auto [out, in] = in_out(phi, w);
  Scalar a(0), b(0);
  for (Vertex x : u) a += out[x] * w[x];
  for (Vertex y : v) b += in[y] * w[y];
  return {a, b};
}

struct FlowViolation {
  Vertex vertex;
  std::string bound;  // "out" or "in"
  double value;
};

struct BalanceReport {
  std::vector<double> out, in, net;
  VertexSet sources, sinks;
  std::vector<FlowViolation> violations;
  std::optional<double> global_integral;
  bool ok() const { return violations.empty(); }
};

inline std::vector<double> local_weights(const Cocycle& rho, const WeightedGraph* g = nullptr) {
  // exp of log-weight shifted per component; ratios inside a component are exact to rounding.
  std::vector<double> w(rho.size());
  if (g) {
    for (std::uint32_t c = 0; c < g->component_count(); ++c) {
      const auto& mem = g->component_members(c);
      double ref = rho.max_log_weight(mem);
      for (Vertex v : mem) w[v] = std::exp(rho.log_weight(v) - ref);
    }
  } else {
    for (Vertex v = 0; v < w.size(); ++v) w[v] = std::exp(rho.log_weight(v));
  }
  return w;
}

inline BalanceReport validate_flow(const RhoFlow& phi, const Cocycle& rho) {
  BalanceReport r;
  std::size_t n = rho.size();
  r.out.assign(n, 0.0);
  r.in.assign(n, 0.0);
  for (const auto& [xy, val] : phi.entries()) {
    auto [x, y] = xy;
    if (x >= n || y >= n) throw Error(ErrorKind::MalformedFlow, "flow endpoint out of range");
    if (!(val >= 0)) throw Error(ErrorKind::MalformedFlow, "negative flow entry");
    r.out[x] += val;
    r.in[y] += val * rho.rho(x, y);
  }
  r.net.resize(n);
  for (Vertex v = 0; v < n; ++v) {
    r.net[v] = r.in[v] - r.out[v];
    if (r.net[v] < -kFlowTolerance) r.sources.push_back(v);
    if (r.net[v] > kFlowTolerance) r.sinks.push_back(v);
    if (r.out[v] > 1 + kFlowTolerance) r.violations.push_back({v, "out", r.out[v]});
    if (r.in[v] > 1 + kFlowTolerance) r.violations.push_back({v, "in", r.in[v]});
  }
  return r;
}

inline BalanceReport validate_flow(const RhoFlow& phi, const Cocycle& rho, const RhoMeasure& mu) {
  BalanceReport r = validate_flow(phi, rho);
  double s = 0;
  for (Vertex v = 0; v < r.net.size(); ++v) s += r.net[v] * mu.atom(v);
  r.global_integral = s;
  return r;
}

inline std::pair<double, double> balance_check(const RhoFlow& phi, const Cocycle& rho, std::span<const Vertex> u,
                                               std::span<const Vertex> v) {
  require_closed(phi, u, v);
  VertexSet uv = set_union(u, v);
  double ref = rho.max_log_weight(uv);
  double a = 0, b = 0;
  for (const auto& [xy, val] : phi.entries()) {
    if (!std::binary_search(u.begin(), u.end(), xy.first)) continue;
    // out(x) ρ(x) and in(y) ρ(y) both pick up val ρ(x)
    double m = val * std::exp(rho.log_weight(xy.first) - ref);
    a += m;
    b += m;
  }
  return {a, b};
}

// ∫ ∂φ dμ; zero for any valid flow.
inline double global_balance(const RhoFlow& phi, const Cocycle& rho, const RhoMeasure& mu) {
  return *validate_flow(phi, rho, mu).global_integral;
}

// Greedy ρ-decreasing transport inside every F-class: u ∈ U sends w(u) to V, each v receiving in(v) ≤ 1.
inline RhoFlow define_flow(const EquivRel& F, const Cocycle& rho, std::span<const Vertex> u,
                           std::span<const Vertex> v, std::span<const double> w) {
  RhoFlow phi;
  std::map<std::uint32_t, std::pair<VertexSet, VertexSet>> by_class;
  for (Vertex x : u) by_class[F.class_of(x)].first.push_back(x);
  for (Vertex y : v) by_class[F.class_of(y)].second.push_back(y);
  for (auto& [cls, uv] : by_class) {
    auto& [uy, vy] = uv;
    if (uy.empty()) continue;
    VertexSet all = set_union(uy, vy);
    double ref = rho.max_log_weight(all);
    double need = 0, have = 0;
    for (Vertex x : uy) {
      if (w[x] < 0 || w[x] > 1 + kFlowTolerance) throw Error(ErrorKind::BadArgument, "w must lie in [0,1]");
      need += w[x] * std::exp(rho.log_weight(x) - ref);
    }
    for (Vertex y : vy) have += std::exp(rho.log_weight(y) - ref);
    if (have < need * (1 - kFlowTolerance))
      throw Error(ErrorKind::InsufficientCapacity,
                  "class of vertex " + std::to_string(F.class_members(cls).front()) + " lacks room");
    std::vector<Vertex> senders = rho_decreasing(rho, uy), receivers = rho_decreasing(rho, vy);
    std::vector<double> cap(receivers.size());  // remaining room, in mass units
    for (std::size_t j = 0; j < receivers.size(); ++j) cap[j] = std::exp(rho.log_weight(receivers[j]) - ref);
    std::size_t j = 0;
    for (Vertex x : senders) {
      double unit = std::exp(rho.log_weight(x) - ref);
      double supply = w[x] * unit;
      std::size_t k = j;
      while (supply > 0 && k < receivers.size()) {
        if (receivers[k] == x || cap[k] <= 0) {
          ++k;
          continue;
        }
        double t = std::min(supply, cap[k]);
        phi.add(x, receivers[k], t / unit);
        supply -= t;
        cap[k] -= t;
        if (cap[k] <= 0) ++k;
      }
      while (j < receivers.size() && cap[j] <= 0) ++j;
      if (supply > need * 1e-12 + 1e-300 && k >= receivers.size())
        throw Error(ErrorKind::InsufficientCapacity, "room exhausted at sender " + std::to_string(x));
    }
  }
  return phi;
}

inline RhoFlow sum_flows(std::span<const RhoFlow> flows, const Cocycle& rho) {
  RhoFlow total;
  for (const auto& phi : flows)
    for (const auto& [xy, val] : phi.entries()) total.add(xy.first, xy.second, val);
  auto r = validate_flow(total, rho);
  if (!r.ok())
    throw Error(ErrorKind::MalformedFlow, "sum breaches the " + r.violations.front().bound + " bound at vertex " +
                                              std::to_string(r.violations.front().vertex));
  return total;
}

struct ComponentBalance {
  std::uint32_t component;
  std::size_t sources = 0, sinks = 0;
};

struct DisbalanceReport {
  BalanceReport balance;
  std::vector<ComponentBalance> components;
};

inline DisbalanceReport disbalance_report(const RhoFlow& phi, const Cocycle& rho, const WeightedGraph& g) {
  DisbalanceReport d{validate_flow(phi, rho), {}};
  for (std::uint32_t c = 0; c < g.component_count(); ++c) d.components.push_back({c});
  for (Vertex v : d.balance.sources) ++d.components[g.component(v)].sources;
  for (Vertex v : d.balance.sinks) ++d.components[g.component(v)].sinks;
  return d;
}

// Lines "x y value".
inline void write_flow(std::ostream& out, const RhoFlow& phi) {
  out.precision(17);
  for (const auto& [xy, val] : phi.entries()) out << xy.first << ' ' << xy.second << ' ' << val << '\n';
}

inline RhoFlow read_flow(std::istream& in, std::size_t n) {
  RhoFlow phi;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    long long x, y;
    double val;
    if (!(ls >> x)) continue;
    if (!(ls >> y >> val)) throw Error(ErrorKind::Parse, "flow line " + std::to_string(lineno));
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= n || static_cast<std::size_t>(y) >= n)
      throw Error(ErrorKind::MalformedFlow, "flow endpoint out of range on line " + std::to_string(lineno));
    phi.add(static_cast<Vertex>(x), static_cast<Vertex>(y), val);
  }
  return phi;
}

}  // namespace ergodic
