// wallperc: command-line front end for the wall-percolation toolkit.
//
// Pipelines: graph generation -> kernels / cut families -> percolation
// sweeps -> decay fits. Every command is deterministic given its arguments
// (including --seed); repeated runs produce byte-identical output. Files are
// written atomically (temp + rename), never partially.
//
// Exit codes:
//   0  success (reports carrying warnings or infeasible-as-data still exit 0)
//   2  usage: bad flags, malformed argument lists, incompatible inputs
//   3  resource cap exceeded (vertex, cut or edge limits)
//   4  unreadable or malformed input files
//   5  mathematical precondition failed (non-CND kernel, vanishing two-point
//      values, ...) or a `verify` check failed

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wallperc/compression.hpp"
#include "wallperc/cutcone.hpp"
#include "wallperc/error.hpp"
#include "wallperc/graph.hpp"
#include "wallperc/io.hpp"
#include "wallperc/kernel.hpp"
#include "wallperc/percolation.hpp"
#include "wallperc/walls.hpp"

namespace {

using nlohmann::json;
using namespace wallperc;

constexpr int kUnset = std::numeric_limits<int>::min();

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void usage_fail(const std::string& msg) { throw UsageError(msg); }

int exit_code_for(Err code) {
  switch (code) {
    // Bad arguments or incompatible inputs.
    case Err::EmptySpec:
    case Err::VertexOutOfRange:
    case Err::BadAlpha:
    case Err::BadProbability:
    case Err::NegativeTime:
    case Err::ZeroSamples:
    case Err::NonpositiveLambda:
    case Err::NonpositiveGamma:
    case Err::EmptyGrid:
    case Err::BadPermutation:
    case Err::SizeMismatch:
    case Err::NotAnEdge:
    case Err::EmptyFamily:
    case Err::NonIncreasingEvent:
      return 2;
    // Resource caps.
    case Err::SizeOverflow:
    case Err::TooLarge:
    case Err::TooManyWalls:
    case Err::TooManyEdges:
      return 3;
    // Unreadable or malformed files.
    case Err::ParseError:
    case Err::IoError:
    case Err::SelfLoop:
    case Err::DuplicateEdge:
    case Err::DisconnectedGraph:
      return 4;
    // Mathematical preconditions.
    case Err::NotCND:
    case Err::NonSymmetric:
    case Err::NonzeroDiagonal:
    case Err::NegativeEntry:
    case Err::ZeroTwoPoint:
    case Err::VariationViolated:
    case Err::DegenerateCloud:
      return 5;
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Small shared helpers
// ---------------------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> parse_doubles(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      usage_fail(std::string(flag) + ": bad number '" + tok + "'");
    }
    if (pos != tok.size()) usage_fail(std::string(flag) + ": bad number '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) usage_fail(std::string(flag) + ": empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      usage_fail(std::string(flag) + ": bad integer '" + tok + "'");
    }
    if (pos != tok.size() || v < std::numeric_limits<int>::min() ||
        v > std::numeric_limits<int>::max())
      usage_fail(std::string(flag) + ": bad integer '" + tok + "'");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) usage_fail(std::string(flag) + ": empty list");
  return out;
}

json kernel_json(const Kernel& k) {
  json rows = json::array();
  for (int i = 0; i < k.n(); ++i) {
    json row = json::array();
    for (int j = 0; j < k.n(); ++j) row.push_back(k.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Kernel kernel_from_json(const json& j, int n, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != n)
    fail(Err::ParseError, std::string(what) + ": expected an n x n matrix");
  Kernel k(n);
  for (int i = 0; i < n; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(Err::ParseError, std::string(what) + ": row " + std::to_string(i) + " has wrong length");
    for (int c = 0; c < n; ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number())
        fail(Err::ParseError, std::string(what) + ": non-numeric entry");
      k.at(i, c) = cell.get<double>();
    }
  }
  return k;
}

json graph_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
  return json{{"n", g.n}, {"edges", edges}};
}

std::string kernel_csv_text(const Kernel& k) {
  std::ostringstream ss;
  write_kernel_csv(ss, k);
  return ss.str();
}

// Write to the given path (atomically) or, with an empty path, to stdout.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  atomic_write_file(out_path, content);
  std::cerr << "wrote " << out_path << "\n";
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

// Exactly one of --graph (family descriptor) and --graph-file (edge list).
Graph load_graph(const std::string& spec, const std::string& file) {
  if (spec.empty() == file.empty())
    usage_fail("exactly one of --graph and --graph-file is required");
  if (!spec.empty()) return gen_graph(spec);
  try {
    return read_edge_list_file(file);
  } catch (const Error& e) {
    if (e.code() == Err::VertexOutOfRange)
      fail(Err::ParseError, "graph file '" + file + "': " + e.what());
    throw;
  }
}

// ---------------------------------------------------------------------------
// Wall sources
// ---------------------------------------------------------------------------

struct WallSetup {
  CutFamily walls;
  std::string source;
  std::optional<CutFamilyMeta> meta;  // half-space sampler provenance
};

WallSetup build_walls(const std::string& src, const Graph& g, std::uint64_t samples,
                      std::uint64_t seed) {
  auto colon = src.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= src.size())
    usage_fail("--walls must be radial:ROOT, l1:FILE, hilbert:FILE or cuts:FILE");
  std::string kind = src.substr(0, colon);
  std::string arg = src.substr(colon + 1);
  WallSetup ws;
  ws.source = src;
  if (kind == "radial") {
    std::size_t pos = 0;
    int root = 0;
    try {
      root = std::stoi(arg, &pos);
    } catch (const std::exception&) {
      usage_fail("--walls radial: bad root '" + arg + "'");
    }
    if (pos != arg.size()) usage_fail("--walls radial: bad root '" + arg + "'");
    ws.walls = radial_walls(g, root);
  } else if (kind == "l1") {
    PointCloud pc = read_point_cloud_csv_file(arg);
    ws.walls = walls_from_l1_embedding(pc, g);
  } else if (kind == "hilbert") {
    Kernel k = read_kernel_csv_file(arg);
    PointCloud pc = hilbert_embedding(k);
    HalfspaceWalls hw = walls_from_hilbert_embedding(pc, g, samples, seed);
    ws.walls = hw.walls;
    ws.meta = CutFamilyMeta{hw.seed, hw.samples, hw.crofton};
  } else if (kind == "cuts") {
    ws.walls = read_cut_family_file(arg);
  } else {
    usage_fail("unknown wall source '" + kind + "' (radial, l1, hilbert, cuts)");
  }
  if (ws.walls.n() != g.n)
    fail(Err::SizeMismatch, "wall family covers " + std::to_string(ws.walls.n()) +
                                " vertices but the graph has " + std::to_string(g.n));
  return ws;
}

std::vector<double> crossing_weights(const CutFamily& w, const Graph& g) {
  std::vector<double> out(static_cast<std::size_t>(g.edge_count()));
  for (int e = 0; e < g.edge_count(); ++e)
    out[static_cast<std::size_t>(e)] = wall_crossing(w, g, g.edges[e].first, g.edges[e].second).weight;
  return out;
}

// ---------------------------------------------------------------------------
// Reports shared by `perc sweep` and `verify`
// ---------------------------------------------------------------------------

constexpr double kExactTol = 1e-12;

json exact_marginals_json(const PercolationDistribution& d, const Graph& g,
                          const std::vector<double>& crossing, double t) {
  json edges = json::array();
  double worst = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    double observed = 0.0;
    for (int a = 0; a < d.atoms(); ++a)
      if (d.configs[static_cast<std::size_t>(a)].test(e)) observed += d.probs[static_cast<std::size_t>(a)];
    double expected = std::exp(-t * crossing[static_cast<std::size_t>(e)]);
    double dev = std::fabs(observed - expected);
    worst = std::max(worst, dev);
    edges.push_back({{"u", g.edges[e].first},
                     {"v", g.edges[e].second},
                     {"weight", crossing[static_cast<std::size_t>(e)]},
                     {"expected", expected},
                     {"observed", observed},
                     {"abs_dev", dev}});
  }
  return json{{"edges", edges}, {"max_abs_dev", worst}, {"tol", kExactTol}, {"pass", worst <= kExactTol}};
}

json mc_marginals_json(const std::vector<std::uint64_t>& edge_open, const Graph& g,
                       const std::vector<double>& crossing, double t, std::uint64_t replicas) {
  json edges = json::array();
  double worst = 0.0;
  bool all_ok = true;
  for (int e = 0; e < g.edge_count(); ++e) {
    double observed = static_cast<double>(edge_open[static_cast<std::size_t>(e)]) /
                      static_cast<double>(replicas);
    double expected = std::exp(-t * crossing[static_cast<std::size_t>(e)]);
    double sigma = std::sqrt(std::max(expected * (1.0 - expected), 0.0) /
                             static_cast<double>(replicas));
    double dev = std::fabs(observed - expected);
    bool ok = dev <= 4.0 * sigma + kExactTol;
    all_ok = all_ok && ok;
    worst = std::max(worst, dev);
    edges.push_back({{"u", g.edges[e].first},
                     {"v", g.edges[e].second},
                     {"weight", crossing[static_cast<std::size_t>(e)]},
                     {"expected", expected},
                     {"observed", observed},
                     {"abs_dev", dev},
                     {"sigma", sigma}});
  }
  return json{{"edges", edges},
              {"max_abs_dev", worst},
              {"rule", "abs_dev <= 4*sigma + 1e-12"},
              {"pass", all_ok}};
}

json sandwich_json(const SandwichReport& sw) {
  return json{{"delta", sw.delta},
              {"min_lower_slack", sw.min_lower_slack},
              {"min_upper_slack", sw.min_upper_slack},
              {"lower_pair", json::array({sw.lower_u, sw.lower_v})},
              {"upper_pair", json::array({sw.upper_u, sw.upper_v})},
              {"pass", sw.pass}};
}

// sup { tau(u,v) : d(u,v) > r } for r = 0 .. max distance - 1.
std::vector<double> decay_curve(const Kernel& tau, const DistanceMatrix& dist) {
  int maxd = dist.max();
  std::vector<double> out(static_cast<std::size_t>(maxd), 0.0);
  for (int u = 0; u < tau.n(); ++u)
    for (int v = u + 1; v < tau.n(); ++v) {
      int d = dist.at(u, v);
      double tv = tau.at(u, v);
      for (int r = 0; r < d; ++r)
        out[static_cast<std::size_t>(r)] = std::max(out[static_cast<std::size_t>(r)], tv);
    }
  return out;
}

json decay_json(const std::vector<double>& decay) {
  json arr = json::array();
  for (std::size_t r = 0; r < decay.size(); ++r)
    arr.push_back({{"r", static_cast<int>(r)}, {"sup_tau", decay[r]}});
  return arr;
}

// ---------------------------------------------------------------------------
// graph gen
// ---------------------------------------------------------------------------

struct GraphGenOpts {
  std::string family;
  std::string out;
  int n = kUnset, a = kUnset, b = kUnset;
  int arity = kUnset, depth = kUnset;
  int dim = kUnset, side = kUnset;
};

void run_graph_gen(const GraphGenOpts& o) {
  auto need = [&](int v, const char* flag) {
    if (v == kUnset)
      usage_fail(std::string(flag) + " is required for family '" + o.family + "'");
    return std::to_string(v);
  };
  std::string desc;
  if (o.family == "path" || o.family == "cycle") {
    desc = o.family + ":" + need(o.n, "--n");
  } else if (o.family == "grid") {
    desc = "grid:" + need(o.dim, "--dim") + "," + need(o.side, "--side");
  } else if (o.family == "tree") {
    desc = "tree:" + need(o.arity, "--arity") + "," + need(o.depth, "--depth");
  } else if (o.family == "complete_bipartite" || o.family == "kbipartite") {
    desc = "complete_bipartite:" + need(o.a, "--a") + "," + need(o.b, "--b");
  } else if (o.family == "hypercube") {
    desc = "hypercube:" + need(o.dim, "--dim");
  } else {
    usage_fail("unknown family '" + o.family +
               "' (path, cycle, grid, tree, complete_bipartite, hypercube)");
  }
  Graph g = gen_graph(desc);
  DistanceMatrix dist = distance_matrix(g);
  {
    std::ostringstream ss;
    write_edge_list(ss, g);
    atomic_write_file(o.out + ".edges", ss.str());
  }
  atomic_write_file(o.out + ".dist.csv", kernel_csv_text(Kernel::from_distance(dist)));
  std::cerr << "wrote " << o.out << ".edges\n";
  std::cerr << "wrote " << o.out << ".dist.csv\n";
}

// ---------------------------------------------------------------------------
// kernel check / cutcone / schoenberg
// ---------------------------------------------------------------------------

struct KernelCheckOpts {
  std::string in, out;
  bool pd = false, cnd = false;
  double tol = 1e-9;
};

void run_kernel_check(const KernelCheckOpts& o) {
  if (!o.pd && !o.cnd) usage_fail("pass at least one of --pd and --cnd");
  Kernel k = read_kernel_csv_file(o.in);
  json out;
  if (o.pd) {
    PdReport r = is_positive_definite(k, o.tol);
    out["pd"] = r.positive;
    out["min_eig"] = r.min_eigenvalue;
    out["pd_threshold"] = r.threshold;
  }
  if (o.cnd) {
    CndReport r = is_cond_negative_definite(k, o.tol);
    out["cnd"] = r.negative_definite;
    out["min_gram_eig"] = r.min_gram_eigenvalue;
    out["cnd_threshold"] = r.threshold;
    if (!r.negative_definite) {
      out["witness"] = r.witness;
      out["witness_form"] = r.witness_form;
    }
  }
  emit(o.out, json_text(out));
}

struct KernelCutconeOpts {
  std::string in, out;
  double tol = 1e-9;
};

void run_kernel_cutcone(const KernelCutconeOpts& o) {
  Kernel k = read_kernel_csv_file(o.in);
  CutConeResult res = cut_cone_membership(k, o.tol);
  json out;
  out["status"] = res.feasible ? "feasible" : "infeasible";
  if (res.feasible) {
    out["total_weight"] = res.total_weight;
    out["reconstruction_error"] = res.reconstruction_error;
    out["family"] = json::parse(cut_family_json(res.family));
  } else {
    out["certificate"] = res.certificate;
    out["certificate_value"] = res.certificate_value;
  }
  emit(o.out, json_text(out));
}

struct KernelSchoenbergOpts {
  std::string in, out;
  double lambda = 1.0;
};

void run_kernel_schoenberg(const KernelSchoenbergOpts& o) {
  Kernel k = read_kernel_csv_file(o.in);
  emit(o.out, kernel_csv_text(schoenberg_transform(k, o.lambda)));
}

// ---------------------------------------------------------------------------
// perc sweep / perc dist
// ---------------------------------------------------------------------------

struct SweepOpts {
  std::string graph, graph_file, walls_src, tlist, out;
  std::string mode = "exact";
  std::uint64_t replicas = 100000;
  std::uint64_t seed = 1;
  std::uint64_t samples = 10000;
  int threads = 0;
};

void run_perc_sweep(const SweepOpts& o) {
  Graph g = load_graph(o.graph, o.graph_file);
  std::vector<double> ts = parse_doubles(o.tlist, "--t");
  if (ts.front() < 0.0) usage_fail("--t: times must be nonnegative");
  for (std::size_t i = 0; i + 1 < ts.size(); ++i)
    if (!(ts[i] < ts[i + 1])) usage_fail("--t: grid must be strictly increasing");
  bool mc = o.mode == "mc";
  if (mc && o.replicas == 0) usage_fail("--replicas must be >= 1 in mc mode");

  WallSetup ws = build_walls(o.walls_src, g, o.samples, o.seed);
  DistanceMatrix dist = distance_matrix(g);
  Kernel wk = wall_kernel(ws.walls);
  std::vector<double> crossing = crossing_weights(ws.walls, g);

  json out;
  out["graph"] = graph_json(g);
  json wallsj = {{"source", ws.source},
                 {"count", ws.walls.size()},
                 {"total_weight", ws.walls.total_weight()}};
  if (ws.meta)
    wallsj["sampler"] = {{"seed", ws.meta->seed},
                         {"samples", ws.meta->samples},
                         {"crofton", ws.meta->crofton}};
  out["walls"] = wallsj;
  out["mode"] = o.mode;
  out["t"] = ts;
  if (mc) {
    out["seed"] = o.seed;
    out["replicas"] = o.replicas;
  }

  json results = json::array();
  std::vector<Kernel> taus;
  std::vector<std::vector<double>> decays;
  for (double t : ts) {
    json r;
    r["t"] = t;
    Kernel tau;
    if (mc) {
      // The same seed across the grid reuses the replica clock streams, so
      // the sweep is a single monotone coupling thresholded at each t.
      McRun run = run_mc(ws.walls, g, t, o.replicas, o.seed, o.threads);
      tau = run.estimate.tau;
      r["tau"] = kernel_json(tau);
      r["ci"] = kernel_json(run.estimate.ci);
      r["marginals"] = mc_marginals_json(run.edge_open, g, crossing, t, o.replicas);
      r["sandwich"] = sandwich_json(
          verify_sandwich(tau, wk, g, dist, t, SandwichMode::Plain, &run.estimate.ci));
    } else {
      PercolationDistribution d = distribution_from_walls(ws.walls, g, t);
      tau = two_point_exact(d);
      r["tau"] = kernel_json(tau);
      r["marginals"] = exact_marginals_json(d, g, crossing, t);
      r["sandwich"] =
          sandwich_json(verify_sandwich(tau, wk, g, dist, t, SandwichMode::Plain, nullptr));
    }
    std::vector<double> dec = decay_curve(tau, dist);
    r["decay"] = decay_json(dec);
    results.push_back(std::move(r));
    taus.push_back(std::move(tau));
    decays.push_back(std::move(dec));
  }
  out["results"] = std::move(results);

  std::string text = json_text(out);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  atomic_write_file(o.out + ".json", text);
  std::cerr << "wrote " << o.out << ".json\n";
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string path = o.out + ".tau.t" + format_double(ts[i]) + ".csv";
    atomic_write_file(path, kernel_csv_text(taus[i]));
    std::cerr << "wrote " << path << "\n";
  }
  {
    std::ostringstream ss;
    ss << "r";
    for (double t : ts) ss << ",t=" << format_double(t);
    ss << "\n";
    int maxd = dist.max();
    for (int r = 0; r < maxd; ++r) {
      ss << r;
      for (std::size_t i = 0; i < ts.size(); ++i)
        ss << "," << format_double(decays[i][static_cast<std::size_t>(r)]);
      ss << "\n";
    }
    atomic_write_file(o.out + ".decay.csv", ss.str());
    std::cerr << "wrote " << o.out << ".decay.csv\n";
  }
}

struct DistOpts {
  std::string graph, graph_file, walls_src, out;
  double t = 0.0;
  double p = 0.5;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
  bool walls_given = false, p_given = false, t_given = false;
};

void run_perc_dist(const DistOpts& o) {
  Graph g = load_graph(o.graph, o.graph_file);
  if (o.walls_given == o.p_given)
    usage_fail("exactly one of --walls and --bernoulli is required");
  PercolationDistribution d;
  if (o.walls_given) {
    if (!o.t_given) usage_fail("--t is required with --walls");
    WallSetup ws = build_walls(o.walls_src, g, o.samples, o.seed);
    d = distribution_from_walls(ws.walls, g, o.t);
  } else {
    d = exhaustive_bernoulli(g, o.p);
  }
  emit(o.out, distribution_json(d));
}

// ---------------------------------------------------------------------------
// compress fit / alpha / dual
// ---------------------------------------------------------------------------

struct SweepFile {
  Graph g;
  std::vector<double> ts;
  std::vector<Kernel> taus;
  std::vector<Kernel> cis;  // empty when the sweep was exact
};

SweepFile load_sweep(const std::string& path) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("sweep json: ") + e.what());
  }
  SweepFile s;
  try {
    const json& jg = j.at("graph");
    int n = jg.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& je : jg.at("edges"))
      edges.emplace_back(je.at(0).get<int>(), je.at(1).get<int>());
    s.g = build_graph(n, std::move(edges));
    for (const auto& r : j.at("results")) {
      s.ts.push_back(r.at("t").get<double>());
      s.taus.push_back(kernel_from_json(r.at("tau"), n, "sweep json tau"));
      if (r.contains("ci")) s.cis.push_back(kernel_from_json(r.at("ci"), n, "sweep json ci"));
    }
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("sweep json: ") + e.what());
  }
  if (s.ts.empty()) fail(Err::ParseError, "sweep json: no results");
  if (!s.cis.empty() && s.cis.size() != s.taus.size())
    fail(Err::ParseError, "sweep json: ci present for only part of the grid");
  return s;
}

struct CompressFitOpts {
  std::string in, out;
  double alpha = 1.0;
  bool no_ci = false;
};

void run_compress_fit(const CompressFitOpts& o) {
  SweepFile s = load_sweep(o.in);
  DistanceMatrix dist = distance_matrix(s.g);
  bool use_ci = !o.no_ci && !s.cis.empty();
  json fits = json::array();
  for (std::size_t i = 0; i < s.ts.size(); ++i) {
    FitResult f = fit_stretched_exponential(s.taus[i], dist, o.alpha, s.ts[i],
                                            use_ci ? &s.cis[i] : nullptr);
    fits.push_back(json::parse(fit_result_json(f)));
  }
  emit(o.out, json_text(json{{"alpha", o.alpha}, {"fits", fits}}));
}

struct CompressAlphaOpts {
  std::string in, out;
  double cap = 10.0;
  bool no_ci = false;
};

void run_compress_alpha(const CompressAlphaOpts& o) {
  SweepFile s = load_sweep(o.in);
  DistanceMatrix dist = distance_matrix(s.g);
  std::vector<std::pair<double, Kernel>> sweep;
  for (std::size_t i = 0; i < s.ts.size(); ++i) sweep.emplace_back(s.ts[i], s.taus[i]);
  std::vector<const Kernel*> cip;
  bool use_ci = !o.no_ci && !s.cis.empty();
  if (use_ci)
    for (const Kernel& c : s.cis) cip.push_back(&c);
  AlphaEstimate est = estimate_alpha(sweep, dist, o.cap, use_ci ? &cip : nullptr);
  json grid = json::array();
  for (const auto& [a, c] : est.grid) grid.push_back(json::array({a, c}));
  json out = {{"alpha_hat", est.alpha_hat}, {"feasible", est.feasible},
              {"degenerate", est.degenerate}, {"cap", o.cap}, {"grid", grid}};
  if (!est.diagnostic.empty()) out["diagnostic"] = est.diagnostic;
  emit(o.out, json_text(out));
}

struct CompressDualOpts {
  std::string graph, graph_file, gammas, out;
  double alpha = 1.0;
  double C = 1.0;
};

void run_compress_dual(const CompressDualOpts& o) {
  Graph g = load_graph(o.graph, o.graph_file);
  DistanceMatrix dist = distance_matrix(g);
  std::vector<double> gammas = parse_doubles(o.gammas, "--gammas");
  std::vector<Kernel> taus;
  for (double gm : gammas)
    taus.push_back(Kernel::from_function(
        g.n, [&](int u, int v) { return std::exp(-gm * dist.at(u, v)); }));
  DualKernelReport rep = dual_kernel(taus, gammas, dist, o.alpha, o.C);
  json kernels = json::array();
  for (const Kernel& k : rep.kernels) kernels.push_back(kernel_json(k));
  json out = {{"gammas", gammas},        {"alpha", o.alpha},
              {"C", o.C},                {"kernels", kernels},
              {"lipschitz_excess", rep.lipschitz_excess},
              {"growth_deficit", rep.growth_deficit}};
  if (g.n <= 14) {
    json cc = json::array();
    for (const Kernel& k : rep.kernels) {
      CutConeResult res = cut_cone_membership(k);
      json entry = {{"status", res.feasible ? "feasible" : "infeasible"}};
      if (res.feasible)
        entry["reconstruction_error"] = res.reconstruction_error;
      else
        entry["certificate_value"] = res.certificate_value;
      cc.push_back(std::move(entry));
    }
    out["cutcone"] = std::move(cc);
  }
  emit(o.out, json_text(out));
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

struct DecomposeOpts {
  std::string in, graph, graph_file, order, out;
};

void run_decompose(const DecomposeOpts& o) {
  Graph g = load_graph(o.graph, o.graph_file);
  PercolationDistribution d = read_distribution_file(o.in, g);
  std::vector<int> order;
  if (o.order.empty()) {
    order.resize(static_cast<std::size_t>(g.n));
    for (int v = 0; v < g.n; ++v) order[static_cast<std::size_t>(v)] = v;
  } else {
    order = parse_ints(o.order, "--order");
  }
  CutFamily fam = cut_decomposition(d, order);
  Kernel tau = two_point_exact(d);
  Kernel wk = wall_kernel(fam);
  double dev = 0.0;
  for (int u = 0; u < g.n; ++u)
    for (int v = 0; v < g.n; ++v)
      dev = std::max(dev, std::fabs(wk.at(u, v) - (1.0 - tau.at(u, v))));
  json out = json::parse(cut_family_json(fam));
  out["order"] = order;
  out["total_weight"] = fam.total_weight();
  out["identity"] = {{"max_abs_dev", dev}, {"tol", kExactTol}, {"pass", dev <= kExactTol}};
  emit(o.out, json_text(out));
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string graph, graph_file, walls_src, order;
  double t = 1.0;
  std::uint64_t samples = 10000;
  std::uint64_t seed = 1;
};

int run_verify(const VerifyOpts& o) {
  Graph g = load_graph(o.graph, o.graph_file);
  WallSetup ws = build_walls(o.walls_src, g, o.samples, o.seed);
  DistanceMatrix dist = distance_matrix(g);
  Kernel wk = wall_kernel(ws.walls);
  std::vector<double> crossing = crossing_weights(ws.walls, g);
  PercolationDistribution d = distribution_from_walls(ws.walls, g, o.t);
  Kernel tau = two_point_exact(d);

  struct Row {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Row> rows;

  {
    double worst = 0.0;
    for (int e = 0; e < g.edge_count(); ++e) {
      double observed = 0.0;
      for (int a = 0; a < d.atoms(); ++a)
        if (d.configs[static_cast<std::size_t>(a)].test(e))
          observed += d.probs[static_cast<std::size_t>(a)];
      worst = std::max(worst,
                       std::fabs(observed - std::exp(-o.t * crossing[static_cast<std::size_t>(e)])));
    }
    rows.push_back({"marginals", worst <= kExactTol,
                    "max |P[e open] - exp(-t*w_e)| = " + format_double(worst)});
  }
  {
    SandwichReport sw = verify_sandwich(tau, wk, g, dist, o.t, SandwichMode::Plain, nullptr);
    rows.push_back({"sandwich", sw.pass,
                    "min lower slack = " + format_double(sw.min_lower_slack) +
                        ", min upper slack = " + format_double(sw.min_upper_slack)});
  }
  {
    PdReport pd = is_positive_definite(tau);
    rows.push_back({"psd", pd.positive,
                    "min eigenvalue = " + format_double(pd.min_eigenvalue) +
                        " (threshold " + format_double(pd.threshold) + ")"});
  }
  {
    std::vector<std::vector<int>> events;
    for (int e = 0; e < g.edge_count(); ++e) events.push_back({e});
    FkgReport fk = fkg_check_exact(d, events);
    rows.push_back({"fkg", fk.min_covariance >= -kExactTol,
                    "min covariance = " + format_double(fk.min_covariance) +
                        " over single-edge events"});
  }
  {
    std::vector<int> order;
    if (o.order.empty()) {
      order.resize(static_cast<std::size_t>(g.n));
      for (int v = 0; v < g.n; ++v) order[static_cast<std::size_t>(v)] = v;
    } else {
      order = parse_ints(o.order, "--order");
    }
    CutFamily fam = cut_decomposition(d, order);
    Kernel dk = wall_kernel(fam);
    double dev = 0.0;
    for (int u = 0; u < g.n; ++u)
      for (int v = 0; v < g.n; ++v)
        dev = std::max(dev, std::fabs(dk.at(u, v) - (1.0 - tau.at(u, v))));
    rows.push_back({"decomposition", dev <= kExactTol,
                    "max |wall_kernel - (1 - tau)| = " + format_double(dev)});
  }

  std::cout << "model: graph=" << (o.graph.empty() ? o.graph_file : o.graph)
            << " walls=" << ws.source << " t=" << format_double(o.t) << "\n\n";
  std::cout << std::left << std::setw(16) << "check" << std::setw(8) << "result"
            << "detail\n";
  int passed = 0;
  for (const Row& r : rows) {
    std::cout << std::left << std::setw(16) << r.name << std::setw(8)
              << (r.pass ? "PASS" : "FAIL") << r.detail << "\n";
    if (r.pass) ++passed;
  }
  std::cout << "\n" << passed << "/" << rows.size() << " checks passed\n";
  return passed == static_cast<int>(rows.size()) ? 0 : 5;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"wallperc: percolation on graphs driven by weighted cut families"};
  app.require_subcommand(1);
  int exit_code = 0;

  // graph -------------------------------------------------------------------
  auto* graph_cmd = app.add_subcommand("graph", "graph generation");
  graph_cmd->require_subcommand(1);
  {
    auto o = std::make_shared<GraphGenOpts>();
    auto* gen = graph_cmd->add_subcommand("gen", "write an edge list and a distance CSV");
    gen->add_option("--family", o->family,
                    "path | cycle | grid | tree | complete_bipartite | hypercube")
        ->required();
    gen->add_option("--n", o->n, "vertex count (path, cycle)");
    gen->add_option("--a", o->a, "left side size (complete_bipartite)");
    gen->add_option("--b", o->b, "right side size (complete_bipartite)");
    gen->add_option("--arity", o->arity, "root degree (tree)");
    gen->add_option("--depth", o->depth, "radius (tree)");
    gen->add_option("--dim", o->dim, "dimension (grid, hypercube)");
    gen->add_option("--side", o->side, "side length (grid)");
    gen->add_option("--out", o->out, "output prefix: writes PREFIX.edges and PREFIX.dist.csv")
        ->required();
    gen->callback([o] { run_graph_gen(*o); });
  }

  // kernel ------------------------------------------------------------------
  auto* kernel_cmd = app.add_subcommand("kernel", "kernel tests and transforms");
  kernel_cmd->require_subcommand(1);
  {
    auto o = std::make_shared<KernelCheckOpts>();
    auto* check = kernel_cmd->add_subcommand("check", "positive/negative definiteness report");
    check->add_option("--in", o->in, "kernel CSV")->required();
    check->add_flag("--pd", o->pd, "test positive semidefiniteness");
    check->add_flag("--cnd", o->cnd, "test conditional negative definiteness");
    check->add_option("--tol", o->tol, "relative spectral tolerance (default 1e-9)");
    check->add_option("--out", o->out, "output JSON path (default: stdout)");
    check->callback([o] { run_kernel_check(*o); });
  }
  {
    auto o = std::make_shared<KernelCutconeOpts>();
    auto* cc = kernel_cmd->add_subcommand(
        "cutcone", "decompose into weighted cuts or produce an infeasibility certificate");
    cc->add_option("--in", o->in, "kernel CSV")->required();
    cc->add_option("--tol", o->tol, "LP tolerance (default 1e-9)");
    cc->add_option("--out", o->out, "output JSON path (default: stdout)");
    cc->callback([o] { run_kernel_cutcone(*o); });
  }
  {
    auto o = std::make_shared<KernelSchoenbergOpts>();
    auto* sc = kernel_cmd->add_subcommand("schoenberg", "entrywise exp(-lambda*k) transform");
    sc->add_option("--in", o->in, "kernel CSV")->required();
    sc->add_option("--lambda", o->lambda, "positive rate")->required();
    sc->add_option("--out", o->out, "output CSV path (default: stdout)");
    sc->callback([o] { run_kernel_schoenberg(*o); });
  }

  // perc --------------------------------------------------------------------
  auto* perc_cmd = app.add_subcommand("perc", "percolation sweeps and exact laws");
  perc_cmd->require_subcommand(1);
  {
    auto o = std::make_shared<SweepOpts>();
    auto* sw = perc_cmd->add_subcommand("sweep", "two-point sweep over a time grid");
    sw->add_option("--graph", o->graph, "family descriptor, e.g. path:6 or grid:2,4");
    sw->add_option("--graph-file", o->graph_file, "edge-list file");
    sw->add_option("--walls", o->walls_src, "radial:ROOT | l1:FILE | hilbert:FILE | cuts:FILE")
        ->required();
    sw->add_option("--t", o->tlist, "comma-separated strictly increasing times")->required();
    sw->add_option("--mode", o->mode, "exact | mc (default exact)")
        ->check(CLI::IsMember({"exact", "mc"}));
    sw->add_option("--replicas", o->replicas, "Monte Carlo replicas (default 100000)");
    sw->add_option("--seed", o->seed, "seed for sampling and replicas (default 1)");
    sw->add_option("--threads", o->threads,
                   "worker threads; 0 = WALLPERC_THREADS or hardware (never changes output)");
    sw->add_option("--samples", o->samples, "half-space samples for hilbert walls (default 10000)");
    sw->add_option("--out", o->out,
                   "output prefix: PREFIX.json, PREFIX.tau.t*.csv, PREFIX.decay.csv "
                   "(default: JSON to stdout)");
    sw->callback([o] { run_perc_sweep(*o); });
  }
  {
    auto o = std::make_shared<DistOpts>();
    auto* di = perc_cmd->add_subcommand("dist", "exact configuration law as JSON");
    di->add_option("--graph", o->graph, "family descriptor");
    di->add_option("--graph-file", o->graph_file, "edge-list file");
    auto* wopt = di->add_option("--walls", o->walls_src,
                                "radial:ROOT | l1:FILE | hilbert:FILE | cuts:FILE");
    auto* topt = di->add_option("--t", o->t, "time for the wall law");
    auto* popt = di->add_option("--bernoulli", o->p, "independent edge probability");
    di->add_option("--samples", o->samples, "half-space samples for hilbert walls");
    di->add_option("--seed", o->seed, "seed for hilbert wall sampling");
    di->add_option("--out", o->out, "output JSON path (default: stdout)");
    di->callback([o, wopt, topt, popt] {
      o->walls_given = wopt->count() > 0;
      o->t_given = topt->count() > 0;
      o->p_given = popt->count() > 0;
      run_perc_dist(*o);
    });
  }

  // compress ----------------------------------------------------------------
  auto* comp_cmd = app.add_subcommand("compress", "decay-rate fits over sweep output");
  comp_cmd->require_subcommand(1);
  {
    auto o = std::make_shared<CompressFitOpts>();
    auto* fit = comp_cmd->add_subcommand("fit", "two-sided envelope fit at a fixed alpha");
    fit->add_option("--in", o->in, "sweep JSON from `perc sweep`")->required();
    fit->add_option("--alpha", o->alpha, "stretching exponent in [0,1] (default 1)");
    fit->add_flag("--no-ci", o->no_ci, "ignore confidence intervals even if present");
    fit->add_option("--out", o->out, "output JSON path (default: stdout)");
    fit->callback([o] { run_compress_fit(*o); });
  }
  {
    auto o = std::make_shared<CompressAlphaOpts>();
    auto* al = comp_cmd->add_subcommand("alpha", "largest feasible stretching exponent");
    al->add_option("--in", o->in, "sweep JSON from `perc sweep`")->required();
    al->add_option("--cap", o->cap, "constant budget (default 10)");
    al->add_flag("--no-ci", o->no_ci, "ignore confidence intervals even if present");
    al->add_option("--out", o->out, "output JSON path (default: stdout)");
    al->callback([o] { run_compress_alpha(*o); });
  }
  {
    auto o = std::make_shared<CompressDualOpts>();
    auto* du = comp_cmd->add_subcommand(
        "dual", "rescaled complement kernels (1 - e^(-gamma*d))/gamma along a gamma list");
    du->add_option("--graph", o->graph, "family descriptor");
    du->add_option("--graph-file", o->graph_file, "edge-list file");
    du->add_option("--gammas", o->gammas, "comma-separated decay rates")->required();
    du->add_option("--alpha", o->alpha, "growth exponent for the deficit diagnostic (default 1)");
    du->add_option("--C", o->C, "Lipschitz constant for the excess diagnostic (default 1)");
    du->add_option("--out", o->out, "output JSON path (default: stdout)");
    du->callback([o] { run_compress_dual(*o); });
  }

  // decompose ---------------------------------------------------------------
  {
    auto o = std::make_shared<DecomposeOpts>();
    auto* de = app.add_subcommand(
        "decompose", "cut family reproducing 1 - tau of an exact distribution");
    de->add_option("--in", o->in, "distribution JSON from `perc dist`")->required();
    de->add_option("--graph", o->graph, "family descriptor");
    de->add_option("--graph-file", o->graph_file, "edge-list file");
    de->add_option("--order", o->order, "vertex scan order, e.g. 2,0,1 (default 0..n-1)");
    de->add_option("--out", o->out, "output JSON path (default: stdout)");
    de->callback([o] { run_decompose(*o); });
  }

  // verify ------------------------------------------------------------------
  {
    auto o = std::make_shared<VerifyOpts>();
    auto* ve = app.add_subcommand(
        "verify", "run the exact invariant suite on a model and print a pass/fail table");
    ve->add_option("--graph", o->graph, "family descriptor");
    ve->add_option("--graph-file", o->graph_file, "edge-list file");
    ve->add_option("--walls", o->walls_src, "radial:ROOT | l1:FILE | hilbert:FILE | cuts:FILE")
        ->required();
    ve->add_option("--t", o->t, "time (default 1)");
    ve->add_option("--order", o->order, "vertex order for the decomposition check");
    ve->add_option("--samples", o->samples, "half-space samples for hilbert walls");
    ve->add_option("--seed", o->seed, "seed for hilbert wall sampling");
    ve->callback([o, &exit_code] { exit_code = run_verify(*o); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
