#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "partition.hpp"

namespace ergodic {

struct GraphFile {
  WeightedGraph graph;
  Cocycle cocycle;
  std::vector<double> function;
};

namespace detail {

// Reads whitespace-separated tokens, dropping '#' comments.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks_.push_back(tok);
    }
  }
  bool done() const { return pos_ >= toks_.size(); }
  template <class T>
  T next(const char* what) {
    if (done()) throw Error(ErrorKind::Parse, std::string("unexpected end of input, expected ") + what);
    std::istringstream s(toks_[pos_++]);
    T v{};
    if (!(s >> v) || !s.eof()) throw Error(ErrorKind::Parse, std::string("bad ") + what + " '" + toks_[pos_ - 1] + "'");
    return v;
  }

 private:
  std::vector<std::string> toks_;
  std::size_t pos_ = 0;
};

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return in;
}

}  // namespace detail

// Format: "n m", m lines "u v", n lines "logw f".
inline GraphFile read_graph(std::istream& in) {
  detail::TokenReader r(in);
  auto n = r.next<long long>("vertex count");
  auto m = r.next<long long>("edge count");
  if (n < 0 || m < 0) throw Error(ErrorKind::MalformedGraph, "negative header");
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (long long i = 0; i < m; ++i) {
    auto a = r.next<long long>("edge endpoint");
    auto b = r.next<long long>("edge endpoint");
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw Error(ErrorKind::MalformedGraph, "edge endpoint out of range on edge " + std::to_string(i));
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  std::vector<double> lw(n), f(n);
  for (long long v = 0; v < n; ++v) {
    lw[v] = r.next<double>("log-weight");
    f[v] = r.next<double>("function value");
  }
  if (!r.done()) throw Error(ErrorKind::Parse, "trailing tokens after vertex data");
  return {build_graph(static_cast<std::size_t>(n), edges), Cocycle(std::move(lw)), std::move(f)};
}

inline GraphFile read_graph_file(const std::string& path) {
  auto in = detail::open_in(path);
  return read_graph(in);
}

inline void write_graph(std::ostream& out, const WeightedGraph& g, const Cocycle& rho, std::span<const double> f) {
  out.precision(17);
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [a, b] : g.edges()) out << a << ' ' << b << '\n';
  for (Vertex v = 0; v < g.vertex_count(); ++v) out << rho.log_weight(v) << ' ' << (f.empty() ? 0.0 : f[v]) << '\n';
}

// One line per cell, space-separated ids.
inline void write_prepartition(std::ostream& out, const Prepartition& p) {
  for (const auto& c : p.cells()) {
    for (std::size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
}

inline Prepartition read_prepartition(std::istream& in, std::size_t n) {
  std::vector<VertexSet> cells;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ls(line);
    VertexSet cell;
    long long v;
    while (ls >> v) {
      if (v < 0 || static_cast<std::size_t>(v) >= n) throw Error(ErrorKind::Parse, "cell vertex out of range");
      cell.push_back(static_cast<Vertex>(v));
    }
    if (!ls.eof()) throw Error(ErrorKind::Parse, "bad token in prepartition dump");
    if (!cell.empty()) cells.push_back(std::move(cell));
  }
  return Prepartition(n, std::move(cells));
}

}  // namespace ergodic
