#include "wallperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>

#include "wallperc/error.hpp"
#include "wallperc/rng.hpp"

namespace wallperc {

EdgeConfig::EdgeConfig(int edges, bool all_open) : m(edges), bits((edges + 63) / 64, 0) {
  if (all_open && m > 0) {
    for (auto& w : bits) w = ~std::uint64_t{0};
    int tail = m & 63;
    if (tail) bits.back() = (std::uint64_t{1} << tail) - 1;
  }
}

bool EdgeConfig::subset_of(const EdgeConfig& o) const {
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & ~o.bits[i]) return false;
  return true;
}

int EdgeConfig::count() const {
  int c = 0;
  for (auto w : bits) c += __builtin_popcountll(w);
  return c;
}

namespace {

struct UnionFind {
  std::vector<int> parent, size;

  explicit UnionFind(int n) : parent(n), size(n, 1) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  void reset(int n) {
    parent.resize(n);
    size.assign(n, 1);
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size[a] < size[b]) std::swap(a, b);
    parent[b] = a;
    size[a] += size[b];
  }
};

void cluster_config(const EdgeConfig& cfg, const Graph& g, UnionFind& uf) {
  uf.reset(g.n);
  for (int e = 0; e < g.edge_count(); ++e)
    if (cfg.test(e)) uf.unite(g.edges[e].first, g.edges[e].second);
}

// Per-cut masks of the edges it crosses.
std::vector<EdgeConfig> crossing_masks(const CutFamily& w, const Graph& g) {
  std::vector<EdgeConfig> masks(w.size(), EdgeConfig(g.edge_count(), false));
  for (int c = 0; c < w.size(); ++c)
    for (int e = 0; e < g.edge_count(); ++e)
      if (w.separates(c, g.edges[e].first, g.edges[e].second)) masks[c].set(e);
  return masks;
}

}  // namespace

ActivationTimes sample_activation_times(const CutFamily& w, std::uint64_t seed) {
  if (w.size() == 0) fail(Err::EmptyFamily, "cannot sample an empty cut family");
  ActivationTimes t(w.size());
  for (int c = 0; c < w.size(); ++c) {
    CounterRng rng(seed, static_cast<std::uint64_t>(c));
    t[c] = rng.exponential(w.weight(c));
  }
  return t;
}

EdgeConfig configuration_at(const ActivationTimes& times, double t, const CutFamily& w,
                            const Graph& g) {
  if (static_cast<int>(times.size()) != w.size())
    fail(Err::SizeMismatch, "activation times do not match the cut family");
  if (w.n() != g.n) fail(Err::SizeMismatch, "cut family and graph sizes differ");
  if (t < 0.0) fail(Err::NegativeTime, "time must be nonnegative");
  EdgeConfig cfg(g.edge_count(), true);
  for (int c = 0; c < w.size(); ++c) {
    if (times[c] >= t) continue;
    for (int e = 0; e < g.edge_count(); ++e)
      if (w.separates(c, g.edges[e].first, g.edges[e].second)) cfg.clear(e);
  }
  return cfg;
}

PercolationDistribution distribution_from_walls(const CutFamily& w, const Graph& g, double t) {
  if (w.n() != g.n) fail(Err::SizeMismatch, "cut family and graph sizes differ");
  if (t < 0.0) fail(Err::NegativeTime, "time must be nonnegative");
  if (w.size() > 20)
    fail(Err::TooManyWalls, "exact enumeration capped at 20 cuts, got " + std::to_string(w.size()));

  int m = w.size();
  auto masks = crossing_masks(w, g);
  std::vector<double> p_active(m), p_dormant(m);
  for (int c = 0; c < m; ++c) {
    p_dormant[c] = std::exp(-t * w.weight(c));
    p_active[c] = 1.0 - p_dormant[c];
  }

  std::map<EdgeConfig, double> merged;
  EdgeConfig all_open(g.edge_count(), true);
  // DFS over activation patterns, dormant branch first; zero-probability
  // branches are pruned.
  std::function<void(int, EdgeConfig, double)> walk = [&](int c, EdgeConfig open, double prob) {
    if (prob == 0.0) return;
    if (c == m) {
      merged[open] += prob;
      return;
    }
    walk(c + 1, open, prob * p_dormant[c]);
    EdgeConfig closed = open;
    for (std::size_t i = 0; i < closed.bits.size(); ++i) closed.bits[i] &= ~masks[c].bits[i];
    walk(c + 1, std::move(closed), prob * p_active[c]);
  };
  walk(0, all_open, 1.0);

  PercolationDistribution d;
  d.graph = g;
  d.configs.reserve(merged.size());
  d.probs.reserve(merged.size());
  for (auto& [cfg, p] : merged) {
    d.configs.push_back(cfg);
    d.probs.push_back(p);
  }
  return d;
}

PercolationDistribution exhaustive_bernoulli(const Graph& g, double p) {
  if (!(p >= 0.0 && p <= 1.0)) fail(Err::BadProbability, "p must lie in [0,1]");
  int m = g.edge_count();
  if (m > 20) fail(Err::TooManyEdges, "exact enumeration capped at 20 edges, got " + std::to_string(m));
  PercolationDistribution d;
  d.graph = g;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    int k = __builtin_popcountll(mask);
    double prob = std::pow(p, k) * std::pow(1.0 - p, m - k);
    if (prob == 0.0) continue;
    EdgeConfig cfg(m, false);
    if (m > 0) cfg.bits[0] = mask;
    d.configs.push_back(std::move(cfg));
    d.probs.push_back(prob);
  }
  return d;
}

Kernel two_point_exact(const PercolationDistribution& d) {
  int n = d.graph.n;
  Kernel tau(n, 0.0);
  UnionFind uf(n);
  for (int a = 0; a < d.atoms(); ++a) {
    cluster_config(d.configs[a], d.graph, uf);
    double p = d.probs[a];
    std::vector<int> root(n);
    for (int v = 0; v < n; ++v) root[v] = uf.find(v);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (root[u] == root[v]) {
          tau.at(u, v) += p;
          tau.at(v, u) += p;
        }
  }
  for (int v = 0; v < n; ++v) tau.at(v, v) = 1.0;
  return tau;
}

int default_thread_count() {
  if (const char* env = std::getenv("WALLPERC_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

McRun run_mc(const CutFamily& w, const Graph& g, double t, std::uint64_t replicas,
             std::uint64_t seed, int threads) {
  if (w.n() != g.n) fail(Err::SizeMismatch, "cut family and graph sizes differ");
  if (t < 0.0) fail(Err::NegativeTime, "time must be nonnegative");
  if (replicas == 0) fail(Err::ZeroSamples, "replica count must be positive");
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::uint64_t>(threads, replicas));

  const int n = g.n;
  const int m = g.edge_count();
  const int cuts = w.size();
  auto masks = crossing_masks(w, g);
  // dormant-by-t threshold per cut: clock survives iff uniform <= exp(-t*rate)
  std::vector<double> dormant(cuts);
  for (int c = 0; c < cuts; ++c) dormant[c] = std::exp(-t * w.weight(c));

  std::vector<std::vector<std::uint64_t>> hit_parts(
      threads, std::vector<std::uint64_t>(static_cast<std::size_t>(n) * n, 0));
  std::vector<std::vector<std::uint64_t>> edge_parts(threads,
                                                     std::vector<std::uint64_t>(m, 0));

  auto worker = [&](int ti, std::uint64_t lo, std::uint64_t hi) {
    auto& hits = hit_parts[ti];
    auto& eopen = edge_parts[ti];
    UnionFind uf(n);
    std::vector<int> root(n);
    EdgeConfig cfg(m, true);
    for (std::uint64_t r = lo; r < hi; ++r) {
      std::uint64_t rseed = mix_seed(seed, r);
      for (std::size_t i = 0; i < cfg.bits.size(); ++i) cfg.bits[i] = ~std::uint64_t{0};
      if (m & 63) cfg.bits.back() = (std::uint64_t{1} << (m & 63)) - 1;
      for (int c = 0; c < cuts; ++c) {
        // same uniform the inverse transform would consume for T_c
        double u = CounterRng(rseed, static_cast<std::uint64_t>(c)).uniform01();
        if (u > dormant[c])  // T_c < t: cut active, its wall closes
          for (std::size_t i = 0; i < cfg.bits.size(); ++i) cfg.bits[i] &= ~masks[c].bits[i];
      }
      uf.reset(n);
      for (int e = 0; e < m; ++e)
        if (cfg.test(e)) {
          uf.unite(g.edges[e].first, g.edges[e].second);
          eopen[e] += 1;
        }
      for (int v = 0; v < n; ++v) root[v] = uf.find(v);
      for (int u2 = 0; u2 < n; ++u2)
        for (int v2 = u2 + 1; v2 < n; ++v2)
          if (root[u2] == root[v2]) hits[static_cast<std::size_t>(u2) * n + v2] += 1;
    }
  };

  if (threads == 1) {
    worker(0, 0, replicas);
  } else {
    std::vector<std::thread> pool;
    std::uint64_t chunk = replicas / threads, extra = replicas % threads, lo = 0;
    for (int ti = 0; ti < threads; ++ti) {
      std::uint64_t hi = lo + chunk + (static_cast<std::uint64_t>(ti) < extra ? 1 : 0);
      pool.emplace_back(worker, ti, lo, hi);
      lo = hi;
    }
    for (auto& th : pool) th.join();
  }

  McRun out;
  auto& est = out.estimate;
  est.t = t;
  est.n = n;
  est.trials = replicas;
  est.seed = seed;
  est.hits.assign(static_cast<std::size_t>(n) * n, 0);
  out.edge_open.assign(m, 0);
  for (int ti = 0; ti < threads; ++ti) {
    for (std::size_t i = 0; i < est.hits.size(); ++i) est.hits[i] += hit_parts[ti][i];
    for (int e = 0; e < m; ++e) out.edge_open[e] += edge_parts[ti][e];
  }
  for (int u = 0; u < n; ++u) {
    est.hits[static_cast<std::size_t>(u) * n + u] = replicas;
    for (int v = u + 1; v < n; ++v)
      est.hits[static_cast<std::size_t>(v) * n + u] = est.hits[static_cast<std::size_t>(u) * n + v];
  }

  est.tau = Kernel(n, 0.0);
  est.ci = Kernel(n, 0.0);
  double N = static_cast<double>(replicas);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      double p = static_cast<double>(est.hit(u, v)) / N;
      est.tau.at(u, v) = p;
      // continuity floor keeps the half-width positive at p = 0 or 1
      double pf = std::min(std::max(p, 0.5 / N), 1.0 - 0.5 / N);
      est.ci.at(u, v) = 1.959963984540054 * std::sqrt(pf * (1.0 - pf) / N);
    }
  return out;
}

TwoPointEstimate two_point_mc(const CutFamily& w, const Graph& g, double t,
                              std::uint64_t replicas, std::uint64_t seed, int threads) {
  return run_mc(w, g, t, replicas, seed, threads).estimate;
}

SandwichReport verify_sandwich(const Kernel& tau, const Kernel& k, const Graph& g,
                               const DistanceMatrix& dist, double t, SandwichMode mode,
                               const Kernel* ci) {
  int n = tau.n();
  if (k.n() != n || dist.n != n || g.n != n)
    fail(Err::SizeMismatch, "two-point, kernel, graph and distance sizes must agree");
  auto transform = [&](double x) { return mode == SandwichMode::Sqrt ? std::sqrt(std::max(x, 0.0)) : x; };

  SandwichReport rep;
  rep.delta = 0.0;
  for (auto [u, v] : g.edges) rep.delta = std::max(rep.delta, transform(k.at(u, v)));

  bool first = true;
  double min_adjusted = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double slack_lo = tau.at(u, v) - std::exp(-t * rep.delta * dist.at(u, v));
      double slack_up = std::exp(-t * transform(k.at(u, v))) - tau.at(u, v);
      double room = ci ? 3.0 * ci->at(u, v) : 0.0;
      if (first || slack_lo < rep.min_lower_slack) {
        rep.min_lower_slack = slack_lo;
        rep.lower_u = u;
        rep.lower_v = v;
      }
      if (first || slack_up < rep.min_upper_slack) {
        rep.min_upper_slack = slack_up;
        rep.upper_u = u;
        rep.upper_v = v;
      }
      double adj = std::min(slack_lo + room, slack_up + room);
      min_adjusted = first ? adj : std::min(min_adjusted, adj);
      first = false;
    }
  rep.pass = first || min_adjusted >= -1e-12;
  return rep;
}

FkgReport fkg_check_exact(const PercolationDistribution& d,
                          const std::vector<std::vector<int>>& events) {
  int m = d.graph.edge_count();
  if (m > 20) fail(Err::TooManyEdges, "exact covariances capped at 20 edges");
  std::vector<EdgeConfig> masks;
  masks.reserve(events.size());
  for (const auto& ev : events) {
    EdgeConfig mask(m, false);
    for (int e : ev) {
      if (e < 0 || e >= m)
        fail(Err::NonIncreasingEvent, "event references edge " + std::to_string(e) +
                                          " outside the edge list");
      mask.set(e);
    }
    masks.push_back(std::move(mask));
  }
  int E = static_cast<int>(masks.size());
  // P(A) and P(A and B) from atom sums; upward closures intersect as mask unions.
  std::vector<double> single(E, 0.0);
  std::vector<double> joint(static_cast<std::size_t>(E) * E, 0.0);
  std::vector<char> ind(E);
  for (int a = 0; a < d.atoms(); ++a) {
    for (int i = 0; i < E; ++i) ind[i] = masks[i].subset_of(d.configs[a]) ? 1 : 0;
    double p = d.probs[a];
    for (int i = 0; i < E; ++i) {
      if (!ind[i]) continue;
      single[i] += p;
      for (int j = i; j < E; ++j)
        if (ind[j]) joint[static_cast<std::size_t>(i) * E + j] += p;
    }
  }
  FkgReport rep;
  bool first = true;
  for (int i = 0; i < E; ++i)
    for (int j = i; j < E; ++j) {
      double cov = joint[static_cast<std::size_t>(i) * E + j] - single[i] * single[j];
      if (first || cov < rep.min_covariance) {
        rep.min_covariance = cov;
        rep.worst_a = i;
        rep.worst_b = j;
        first = false;
      }
    }
  if (first) rep.min_covariance = 0.0;
  return rep;
}

CutFamily cut_decomposition(const PercolationDistribution& d, const std::vector<int>& order) {
  int n = d.graph.n;
  std::vector<char> seen(n, 0);
  if (static_cast<int>(order.size()) != n) fail(Err::BadPermutation, "order must list every vertex once");
  for (int v : order) {
    if (v < 0 || v >= n || seen[v]) fail(Err::BadPermutation, "order must list every vertex once");
    seen[v] = 1;
  }
  std::vector<Cut> cuts;
  UnionFind uf(n);
  for (int a = 0; a < d.atoms(); ++a) {
    cluster_config(d.configs[a], d.graph, uf);
    std::vector<int> root(n);
    for (int v = 0; v < n; ++v) root[v] = uf.find(v);
    std::vector<char> covered(n, 0);
    for (int v : order) {
      if (covered[v]) continue;
      Cut cut;
      cut.weight = 0.5 * d.probs[a];
      for (int u = 0; u < n; ++u)
        if (root[u] == root[v]) {
          cut.members.push_back(u);
          covered[u] = 1;
        }
      cuts.push_back(std::move(cut));
    }
  }
  return CutFamily(n, std::move(cuts));
}

}  // namespace wallperc
