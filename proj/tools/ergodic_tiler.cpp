#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ergodic/ergodic.hpp"

namespace {

using namespace ergodic;
using lab::ModelInstance;

constexpr int kOk = 0, kError = 1, kMiss = 2;

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool timing = false;
};

lab::RunConfig load_config(const Globals& gl) {
  lab::RunConfig c = gl.config.empty() ? lab::RunConfig{} : lab::read_config_file(gl.config);
  if (gl.seed) c.model.seed = *gl.seed;
  if (gl.timing) c.timing = true;
  return c;
}

ModelInstance from_file(const std::string& path) {
  GraphFile gf = read_graph_file(path);
  std::vector<double> lw(gf.graph.vertex_count());
  for (Vertex v = 0; v < lw.size(); ++v) lw[v] = gf.cocycle.log_weight(v);
  return lab::detail::finish(std::move(gf.graph), std::move(lw), std::move(gf.function));
}

// Writes to <out>/<name>, or stdout when no directory was given.
template <class F>
void emit(const Globals& gl, const std::string& name, F&& body) {
  if (gl.out.empty()) {
    body(std::cout);
    return;
  }
  std::filesystem::create_directories(gl.out);
  std::string path = gl.out + "/" + name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  body(out);
}

void print_stages(const lab::ConvergenceReport& rep) {
  for (const auto& s : rep.stages)
    std::cerr << "stage " << s.stage << ": within_eps=" << s.mass_within_eps << " covered=" << s.covered_mass
              << " max_tile=" << s.max_tile << " cells=" << s.new_cells << '\n';
  for (const auto& d : rep.stalls)
    std::cerr << "stall at stage " << d.stage << ": " << d.components.size()
              << " components, room violations=" << d.room_violations << '\n';
}

int run_tile(const Globals& gl, const std::string& graph, std::optional<double> eps) {
  auto cfg = load_config(gl);
  ModelInstance m = from_file(graph);
  lab::TilingOptions opt;
  opt.timing = cfg.timing;
  auto [st, rep] = lab::run_tiling(m, eps.value_or(cfg.eps), cfg.max_stages, opt);
  print_stages(rep);
  std::vector<VertexSet> tiles;
  for (auto& c : st.relation.classes())
    if (c.size() > 1) tiles.push_back(c);
  emit(gl, "tiles.txt", [&](std::ostream& o) { write_prepartition(o, Prepartition(m.graph.vertex_count(), tiles)); });
  if (!gl.out.empty()) lab::emit_report(rep, gl.out, lab::to_json(cfg), cfg.model.seed, cfg.timing);
  return rep.success ? kOk : kMiss;
}

int run_flow_check(const Globals& gl, const std::string& graph, const std::string& flow) {
  ModelInstance m = from_file(graph);
  std::ifstream in(flow);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + flow);
  RhoFlow phi = read_flow(in, m.graph.vertex_count());
  BalanceReport r = validate_flow(phi, m.cocycle, m.measure);
  emit(gl, "flow_check.txt", [&](std::ostream& o) {
    o << "entries=" << phi.entries().size() << "\nsources=" << r.sources.size() << "\nsinks=" << r.sinks.size()
      << "\nglobal_integral=" << *r.global_integral << "\nviolations=" << r.violations.size() << '\n';
    for (const auto& v : r.violations) o << "violation " << v.vertex << ' ' << v.bound << ' ' << v.value << '\n';
  });
  return r.ok() ? kOk : kMiss;
}

int run_pack(const Globals& gl, const std::string& graph, double lambda, double L, double p,
             const std::string& audit) {
  ModelInstance m = from_file(graph);
  Instance in{m.graph, m.cocycle, m.f};
  CentralFamily fam(lambda, L);
  if (!audit.empty()) {
    std::ifstream pin(audit);
    if (!pin) throw Error(ErrorKind::Io, "cannot open " + audit);
    Prepartition P = read_prepartition(pin, m.graph.vertex_count());
    for (const auto& c : P.cells())
      if (!family_contains(in, fam, c)) {
        std::cout << "cell at " << c.front() << " is not in the family\n";
        return kMiss;
      }
    auto found = find_pack(in, fam, P, p);
    Prepartition S = saturate(in, fam, P);
    bool saturated = S == P;
    std::cout << "cells=" << P.size() << "\npacked=" << !found.pack << "\nexhaustive=" << found.exhaustive
              << "\nsaturated=" << saturated << '\n';
    if (found.pack) {
      std::cout << "pack:";
      for (Vertex v : *found.pack) std::cout << ' ' << v;
      std::cout << '\n';
    }
    return !found.pack && saturated ? kOk : kMiss;
  }
  auto res = packed_and_saturated(in, fam, p);
  std::cerr << "cells=" << res.partition.size() << " rounds=" << res.rounds << '\n';
  emit(gl, "prepartition.txt", [&](std::ostream& o) { write_prepartition(o, res.partition); });
  return kOk;
}

int run_blocks(const Globals& gl, const std::string& graph, double alpha) {
  ModelInstance m = from_file(graph);
  const auto& g = m.graph;
  std::map<VertexSet, Block> distinct;
  for (Vertex x = 0; x < g.vertex_count(); ++x) {
    Block b = block(g, m.cocycle, x, alpha, m.frontier);
    auto it = distinct.find(b.vertices);
    if (it == distinct.end() || m.cocycle.log_weight(x) > m.cocycle.log_weight(it->second.dominus))
      distinct.insert_or_assign(b.vertices, b);
  }
  // largest first so that parents precede the blocks they contain
  std::vector<const Block*> order;
  for (const auto& [k, b] : distinct) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(),
                   [](const Block* a, const Block* b) { return a->vertices.size() > b->vertices.size(); });
  emit(gl, "blocks.txt", [&](std::ostream& o) {
    std::vector<const Block*> stack;
    for (const Block* b : order) {
      while (!stack.empty() && !is_subset(b->vertices, stack.back()->vertices)) stack.pop_back();
      o << std::string(2 * stack.size(), ' ') << '{';
      for (std::size_t i = 0; i < b->vertices.size(); ++i) o << (i ? " " : "") << b->vertices[i];
      o << "} dominus=" << b->dominus << " rho_max=" << rho_max_ratio(g, m.cocycle, b->vertices)
        << (b->touches_frontier ? " frontier" : "") << '\n';
      stack.push_back(b);
    }
  });
  return kOk;
}

int run_price(const Globals& gl, const std::string& graph, const std::string& mode, std::size_t K,
              const std::string& method) {
  ModelInstance m = from_file(graph);
  PriceMethod pm = method == "exact" ? PriceMethod::Exact : method == "greedy" ? PriceMethod::Greedy : PriceMethod::Local;
  CutReport r;
  if (mode == "vertex") {
    r = vertex_price(m.graph, m.measure.atoms(), K, pm, &m.cocycle);
  } else {
    auto nu = uniform_edge_measure(m.graph);
    r = edge_price(m.graph, nu, K, pm, &m.cocycle);
  }
  emit(gl, "price.txt", [&](std::ostream& o) {
    o << "mode=" << mode << "\nK=" << r.K << "\nmethod=" << method_name(r.method) << "\nexact=" << r.exact
      << "\nmass=" << r.mass << "\nlargest_component=" << r.largest_component
      << "\nlargest_rho_max=" << r.largest_rho_max << "\ncut=";
    if (mode == "vertex")
      for (std::size_t i = 0; i < r.vertices.size(); ++i) o << (i ? " " : "") << r.vertices[i];
    else
      for (std::size_t i = 0; i < r.edges.size(); ++i) o << (i ? " " : "") << r.edges[i].first << '-' << r.edges[i].second;
    o << '\n';
  });
  return kOk;
}

int run_ergodic(const Globals& gl) {
  auto cfg = load_config(gl);
  ModelInstance m = lab::generate_model(cfg.model);
  lab::TilingOptions opt;
  opt.timing = cfg.timing;
  auto [st, rep] = lab::run_tiling(m, cfg.eps, cfg.max_stages, opt);
  print_stages(rep);
  if (gl.out.empty()) lab::write_csv(std::cout, rep, cfg.timing);
  else lab::emit_report(rep, gl.out, lab::to_json(cfg), cfg.model.seed, cfg.timing);
  return rep.success ? kOk : kMiss;
}

int run_ratio(const Globals& gl) {
  auto cfg = load_config(gl);
  ModelInstance m = lab::generate_model(cfg.model);
  std::size_t n = m.graph.vertex_count();
  std::vector<double> g(n, 1.0), f(m.f);
  if (cfg.ratio_g == "smooth") {
    for (std::size_t v = 0; v < n; ++v) g[v] = 1.5 + std::cos(2 * std::numbers::pi * static_cast<double>(v) / static_cast<double>(n));
    for (std::size_t v = 0; v < n; ++v) f[v] = m.f[v] + 0.5 * g[v];
  } else if (cfg.ratio_g != "one") {
    throw Error(ErrorKind::BadArgument, "ratio.g must be one or smooth");
  }
  lab::TilingOptions opt;
  opt.timing = cfg.timing;
  auto r = lab::ratio_experiment(m, f, g, cfg.eps, cfg.max_stages, opt);
  print_stages(r.tiling);
  std::cerr << "target ratio=" << r.target << '\n';
  if (gl.out.empty()) lab::write_csv(std::cout, r.tiling, cfg.timing);
  else lab::emit_report(r.tiling, gl.out, lab::to_json(cfg), cfg.model.seed, cfg.timing);
  return r.tiling.success ? kOk : kMiss;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Connected tilings and ergodic averages on weighted graphs"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals gl;
  app.add_option("--config", gl.config, "key=value run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", gl.seed, "seed for random models");
  app.add_option("--out", gl.out, "output directory");
  app.add_flag("--timing", gl.timing, "record wall times in the CSV");

  std::string graph, flow, audit, mode = "vertex", method = "exact";
  std::optional<double> eps;
  double lambda = 0.1, L = 2, p = 0.05, alpha = 1;
  std::size_t K = 3;

  auto* tile = app.add_subcommand("tile", "tile a graph file and write the final tiles");
  tile->add_option("graph", graph)->required()->check(CLI::ExistingFile);
  tile->add_option("--eps", eps);

  auto* fc = app.add_subcommand("flow-check", "validate a flow dump against a graph");
  fc->add_option("graph", graph)->required()->check(CLI::ExistingFile);
  fc->add_option("flow", flow)->required()->check(CLI::ExistingFile);

  auto* pack = app.add_subcommand("pack", "packed and saturated prepartition in the central family");
  pack->add_option("graph", graph)->required()->check(CLI::ExistingFile);
  pack->add_option("--lambda", lambda);
  pack->add_option("--L", L);
  pack->add_option("--p", p);
  pack->add_option("--audit", audit, "check a prepartition dump instead of building one")->check(CLI::ExistingFile);

  auto* blk = app.add_subcommand("blocks", "block decomposition at magnification alpha");
  blk->add_option("graph", graph)->required()->check(CLI::ExistingFile);
  blk->add_option("--alpha", alpha)->check(CLI::Range(1.0, 1e300));

  auto* price = app.add_subcommand("price", "cheapest K-finitizing cut");
  price->add_option("graph", graph)->required()->check(CLI::ExistingFile);
  price->add_option("--mode", mode)->check(CLI::IsMember({"vertex", "edge"}));
  price->add_option("--k", K)->required();
  price->add_option("--method", method)->check(CLI::IsMember({"exact", "greedy", "local"}));

  auto* erg = app.add_subcommand("ergodic-run", "staged tiling of a generated model");
  auto* ratio = app.add_subcommand("ratio-run", "ratio experiment on a generated model");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*tile) return run_tile(gl, graph, eps);
    if (*fc) return run_flow_check(gl, graph, flow);
    if (*pack) return run_pack(gl, graph, lambda, L, p, audit);
    if (*blk) return run_blocks(gl, graph, alpha);
    if (*price) return run_price(gl, graph, mode, K, method);
    if (*erg) return run_ergodic(gl);
    if (*ratio) return run_ratio(gl);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
