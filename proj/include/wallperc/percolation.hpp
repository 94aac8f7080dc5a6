#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wallperc/graph.hpp"
#include "wallperc/kernel.hpp"
#include "wallperc/walls.hpp"

namespace wallperc {

// First activation time of each cut, indexed like the family.
using ActivationTimes = std::vector<double>;

// Subset of the edge list as a bitmask.
struct EdgeConfig {
  int m = 0;
  std::vector<std::uint64_t> bits;

  explicit EdgeConfig(int edges = 0, bool all_open = false);
  bool test(int e) const { return (bits[e >> 6] >> (e & 63)) & 1u; }
  void set(int e) { bits[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void clear(int e) { bits[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }
  bool subset_of(const EdgeConfig& o) const;
  int count() const;
  bool operator==(const EdgeConfig& o) const { return m == o.m && bits == o.bits; }
  bool operator<(const EdgeConfig& o) const { return bits < o.bits; }
};

// Exact finitely-supported law of an edge configuration, with its graph.
struct PercolationDistribution {
  Graph graph;
  std::vector<EdgeConfig> configs;
  std::vector<double> probs;

  int atoms() const { return static_cast<int>(configs.size()); }
};

// Independent Exp(weight_c) clocks via inverse transform; the draw for cut c
// comes from the counter stream (seed, c), so it does not depend on the
// evaluation order.
ActivationTimes sample_activation_times(const CutFamily& w, std::uint64_t seed);

// Edge e is open at time t iff every cut crossing e has activation time >= t.
EdgeConfig configuration_at(const ActivationTimes& times, double t, const CutFamily& w,
                            const Graph& g);

// Exact configuration law at time t: cut c is activated by time t with
// probability 1-exp(-t*weight_c), independently; identical configurations
// are merged. Capped at 20 cuts.
PercolationDistribution distribution_from_walls(const CutFamily& w, const Graph& g, double t);

// Independent Bernoulli(p) edges, enumerated exactly. Capped at 20 edges.
PercolationDistribution exhaustive_bernoulli(const Graph& g, double p);

// tau(u,v) = P[u and v in one open cluster]; unit diagonal.
Kernel two_point_exact(const PercolationDistribution& d);

struct TwoPointEstimate {
  double t = 0.0;
  int n = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> hits;  // row-major n*n connection counts
  Kernel tau;                       // hits/trials
  Kernel ci;                        // 95% normal half-widths with a continuity floor

  std::uint64_t hit(int u, int v) const { return hits[static_cast<std::size_t>(u) * n + v]; }
};

// Monte Carlo replicas of the wall percolation at time t. Replica r draws its
// clocks from streams (mix_seed(seed, r), cut); integer hit counters make the
// result independent of the thread split. threads = 0 reads WALLPERC_THREADS,
// falling back to the hardware count.
TwoPointEstimate two_point_mc(const CutFamily& w, const Graph& g, double t,
                              std::uint64_t replicas, std::uint64_t seed, int threads = 0);

struct McRun {
  TwoPointEstimate estimate;
  std::vector<std::uint64_t> edge_open;  // per-edge open counts over replicas
};

// two_point_mc plus per-edge open-marginal counters (same replica stream).
McRun run_mc(const CutFamily& w, const Graph& g, double t, std::uint64_t replicas,
             std::uint64_t seed, int threads = 0);

// Worker count used when threads = 0: WALLPERC_THREADS if set, else hardware.
int default_thread_count();

enum class SandwichMode { Plain, Sqrt };

struct SandwichReport {
  double delta = 0.0;            // max transformed kernel value over edges
  double min_lower_slack = 0.0;  // min over pairs of tau - exp(-t*delta*d)
  double min_upper_slack = 0.0;  // min over pairs of exp(-t*k') - tau
  int lower_u = 0, lower_v = 0;
  int upper_u = 0, upper_v = 0;
  bool pass = false;
};

// Two-sided decay bounds exp(-t*delta*d) <= tau <= exp(-t*k') with
// k' = sqrt(k) in Sqrt mode. Exact inputs pass at slack >= -1e-12; when a CI
// matrix is given, each slack is allowed 3 half-widths of room.
SandwichReport verify_sandwich(const Kernel& tau, const Kernel& k, const Graph& g,
                               const DistanceMatrix& dist, double t, SandwichMode mode,
                               const Kernel* ci = nullptr);

struct FkgReport {
  double min_covariance = 0.0;
  int worst_a = 0, worst_b = 0;
};

// Exact covariances of upward closures ("all edges of S open") under the
// distribution; positive association demands them nonnegative.
FkgReport fkg_check_exact(const PercolationDistribution& d,
                          const std::vector<std::vector<int>>& events);

// Cluster decomposition along a vertex order: scanning the order, each first
// visit to an uncovered vertex contributes its cluster as a cut of weight
// p/2. The induced wall kernel reproduces 1 - tau exactly.
CutFamily cut_decomposition(const PercolationDistribution& d, const std::vector<int>& order);

}  // namespace wallperc
