#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "wallperc/error.hpp"
#include "wallperc/percolation.hpp"
#include "wallperc/rng.hpp"

using namespace wallperc;

namespace {

CutFamily path3_identity_walls() {
  return CutFamily(3, {Cut{{1, 2}, 1.0}, Cut{{2}, 1.0}});
}

double marginal_open(const PercolationDistribution& d, int e) {
  double p = 0.0;
  for (int a = 0; a < d.atoms(); ++a)
    if (d.configs[a].test(e)) p += d.probs[a];
  return p;
}

}  // namespace

TEST_CASE("edge configuration bit operations") {
  EdgeConfig all(70, true);
  CHECK(all.count() == 70);
  CHECK(all.test(69));
  all.clear(69);
  CHECK(all.count() == 69);
  CHECK_FALSE(all.test(69));

  EdgeConfig some(70, false);
  some.set(3);
  some.set(66);
  CHECK(some.count() == 2);
  CHECK(some.subset_of(all));
  CHECK_FALSE(all.subset_of(some));
  some.set(69);
  CHECK_FALSE(some.subset_of(all));
}

TEST_CASE("activation times are deterministic exponential clocks") {
  CutFamily fam(3, {Cut{{1}, 2.0}, Cut{{2}, 0.5}});
  ActivationTimes a = sample_activation_times(fam, 42);
  ActivationTimes b = sample_activation_times(fam, 42);
  CHECK(a == b);
  for (double t : a) CHECK(t > 0.0);
  ActivationTimes c = sample_activation_times(fam, 43);
  CHECK(a != c);

  CHECK_ERR(sample_activation_times(CutFamily(3, {}), 1), Err::EmptyFamily);
}

TEST_CASE("a clock's draw does not depend on the other cuts") {
  CutFamily f1(3, {Cut{{1}, 1.0}, Cut{{2}, 2.0}});
  CutFamily f2(3, {Cut{{1}, 5.0}, Cut{{2}, 2.0}});
  // Canonical order puts {1} first and {2} second in both families.
  ActivationTimes t1 = sample_activation_times(f1, 7);
  ActivationTimes t2 = sample_activation_times(f2, 7);
  CHECK(t1[1] == t2[1]);
  CHECK(t1[0] != t2[0]);
}

TEST_CASE("empirical mean of the unit clock") {
  CutFamily fam(2, {Cut{{1}, 1.0}});
  double sum = 0.0;
  const int seeds = 100000;
  for (int s = 0; s < seeds; ++s) sum += sample_activation_times(fam, s)[0];
  CHECK(std::fabs(sum / seeds - 1.0) <= 0.01);
}

TEST_CASE("configurations along the time axis are nested") {
  Graph g = gen_cycle(6);
  std::mt19937 mt(8080);
  CutFamily fam = testutil::random_cut_family(6, 8, mt);
  ActivationTimes times = sample_activation_times(fam, 11);

  EdgeConfig at0 = configuration_at(times, 0.0, fam, g);
  CHECK(at0.count() == g.edge_count());  // nothing has activated at time zero

  EdgeConfig prev = at0;
  for (double t : {0.1, 0.3, 0.7, 1.5, 4.0, 50.0}) {
    EdgeConfig cur = configuration_at(times, t, fam, g);
    CHECK(cur.subset_of(prev));
    prev = cur;
  }

  CHECK_ERR(configuration_at(times, -1.0, fam, g), Err::NegativeTime);
  ActivationTimes wrong(fam.size() + 1, 1.0);
  CHECK_ERR(configuration_at(wrong, 1.0, fam, g), Err::SizeMismatch);
  CHECK_ERR(configuration_at(times, 1.0, fam, gen_path(4)), Err::SizeMismatch);
}

TEST_CASE("exact configuration law of the nested path walls") {
  Graph g = gen_path(3);
  CutFamily fam = path3_identity_walls();
  double t = 0.7;
  PercolationDistribution d = distribution_from_walls(fam, g, t);
  CHECK(d.atoms() == 4);

  double total = 0.0;
  for (double p : d.probs) {
    CHECK(p > 0.0);
    total += p;
  }
  CHECK(std::fabs(total - 1.0) <= 1e-12);

  double q = std::exp(-t);
  CHECK(std::fabs(marginal_open(d, 0) - q) <= 1e-14);
  CHECK(std::fabs(marginal_open(d, 1) - q) <= 1e-14);

  Kernel tau = two_point_exact(d);
  CHECK(std::fabs(tau.at(0, 1) - q) <= 1e-14);
  CHECK(std::fabs(tau.at(0, 2) - std::exp(-2.0 * t)) <= 1e-12);
  for (int v = 0; v < 3; ++v) CHECK(tau.at(v, v) == 1.0);
}

TEST_CASE("a cut crossing both edges collapses the pattern space") {
  Graph g = gen_path(3);
  CutFamily fam(3, {Cut{{1}, 1.0}});  // separates both edges
  PercolationDistribution d = distribution_from_walls(fam, g, 0.4);
  CHECK(d.atoms() == 2);
  Kernel tau = two_point_exact(d);
  // Both edges live and die together.
  CHECK(tau.at(0, 1) == tau.at(1, 2));
  CHECK(tau.at(0, 2) == tau.at(0, 1));
}

TEST_CASE("time zero is the fully open point mass") {
  Graph g = gen_cycle(4);
  CutFamily fam = radial_walls(g, 0);
  PercolationDistribution d = distribution_from_walls(fam, g, 0.0);
  REQUIRE(d.atoms() == 1);
  CHECK(d.probs[0] == 1.0);
  CHECK(d.configs[0].count() == g.edge_count());
}

TEST_CASE("exact enumeration caps and validation") {
  Graph p25 = gen_path(25);
  std::vector<Cut> nested;
  for (int k = 1; k <= 21; ++k) {
    Cut c;
    c.weight = 1.0;
    for (int v = 1; v <= k; ++v) c.members.push_back(v);
    nested.push_back(std::move(c));
  }
  CutFamily fam(25, std::move(nested));
  REQUIRE(fam.size() == 21);
  CHECK_ERR(distribution_from_walls(fam, p25, 1.0), Err::TooManyWalls);
  CHECK_ERR(distribution_from_walls(radial_walls(p25, 0), gen_path(24), 1.0), Err::SizeMismatch);
  CHECK_ERR(distribution_from_walls(radial_walls(p25, 0), p25, -0.1), Err::NegativeTime);

  CHECK_ERR(exhaustive_bernoulli(gen_path(22), 0.5), Err::TooManyEdges);
  CHECK_ERR(exhaustive_bernoulli(gen_path(3), 1.5), Err::BadProbability);
  CHECK_ERR(exhaustive_bernoulli(gen_path(3), -0.1), Err::BadProbability);
}

TEST_CASE("independent edge enumeration") {
  Graph tri = gen_cycle(3);
  PercolationDistribution half = exhaustive_bernoulli(tri, 0.5);
  CHECK(half.atoms() == 8);
  for (double p : half.probs) CHECK(p == doctest::Approx(0.125));

  // Degenerate probabilities collapse to a single atom.
  PercolationDistribution closed = exhaustive_bernoulli(tri, 0.0);
  REQUIRE(closed.atoms() == 1);
  CHECK(closed.configs[0].count() == 0);
  PercolationDistribution open = exhaustive_bernoulli(tri, 1.0);
  REQUIRE(open.atoms() == 1);
  CHECK(open.configs[0].count() == 3);

  PercolationDistribution d = exhaustive_bernoulli(gen_path(2), 0.3);
  Kernel tau = two_point_exact(d);
  CHECK(tau.at(0, 1) == doctest::Approx(0.3).epsilon(1e-15));

  // Triangle two-point function at p = 1/2: direct edge or the detour.
  Kernel tri_tau = two_point_exact(half);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      if (u != v) CHECK(tri_tau.at(u, v) == doctest::Approx(0.625).epsilon(1e-15));
}

TEST_CASE("two-point matrices of wall models are positive semidefinite") {
  std::mt19937 mt(1234);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 4 + trial % 3;
    Graph g = testutil::random_connected_graph(n, 2, mt);
    CutFamily fam = testutil::random_cut_family(n, 5, mt);
    PercolationDistribution d = distribution_from_walls(fam, g, 0.3 + 0.2 * trial);
    Kernel tau = two_point_exact(d);
    CHECK(is_positive_definite(tau).positive);
  }
}

TEST_CASE("monte carlo agrees with its own clock oracle replica by replica") {
  Graph g = gen_path(4);
  CutFamily fam = radial_walls(g, 1);
  double t = 0.8;
  const std::uint64_t replicas = 200;
  const std::uint64_t seed = 90210;

  TwoPointEstimate est = two_point_mc(fam, g, t, replicas, seed, 1);

  // Re-derive every replica through the activation-time path.
  std::vector<std::uint64_t> expect(16, 0);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    ActivationTimes times = sample_activation_times(fam, mix_seed(seed, r));
    EdgeConfig cfg = configuration_at(times, t, fam, g);
    // connectivity by path scan: on a path graph, u~v iff every edge between is open
    for (int u = 0; u < 4; ++u)
      for (int v = u + 1; v < 4; ++v) {
        bool joined = true;
        for (int e = u; e < v; ++e) joined = joined && cfg.test(e);
        if (joined) {
          expect[static_cast<std::size_t>(u) * 4 + v] += 1;
          expect[static_cast<std::size_t>(v) * 4 + u] += 1;
        }
      }
  }
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v)
      if (u != v) CHECK(est.hit(u, v) == expect[static_cast<std::size_t>(u) * 4 + v]);
}

TEST_CASE("monte carlo accuracy, symmetry and bookkeeping") {
  Graph g = gen_path(3);
  CutFamily fam = path3_identity_walls();
  double t = 0.5;
  TwoPointEstimate est = two_point_mc(fam, g, t, 100000, 7);
  CHECK(est.trials == 100000);
  CHECK(est.seed == 7);
  CHECK(est.t == t);
  for (int v = 0; v < 3; ++v) {
    CHECK(est.hit(v, v) == est.trials);
    CHECK(est.tau.at(v, v) == 1.0);
  }
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      CHECK(est.hit(u, v) == est.hit(v, u));
      CHECK(est.ci.at(u, v) > 0.0);
    }
  CHECK(std::fabs(est.tau.at(0, 1) - std::exp(-t)) <= 3.0 * est.ci.at(0, 1));
  CHECK(std::fabs(est.tau.at(1, 2) - std::exp(-t)) <= 3.0 * est.ci.at(1, 2));
  CHECK(std::fabs(est.tau.at(0, 2) - std::exp(-2.0 * t)) <= 3.0 * est.ci.at(0, 2));

  CHECK_ERR(two_point_mc(fam, g, t, 0, 1), Err::ZeroSamples);
  CHECK_ERR(two_point_mc(fam, gen_path(4), t, 10, 1), Err::SizeMismatch);
  CHECK_ERR(two_point_mc(fam, g, -0.5, 10, 1), Err::NegativeTime);
}

TEST_CASE("monte carlo counters do not depend on the thread split") {
  Graph g = gen_cycle(5);
  std::mt19937 mt(5150);
  CutFamily fam = testutil::random_cut_family(5, 6, mt);
  McRun one = run_mc(fam, g, 0.6, 5000, 31337, 1);
  McRun four = run_mc(fam, g, 0.6, 5000, 31337, 4);
  McRun many = run_mc(fam, g, 0.6, 5000, 31337, 16);
  CHECK(one.estimate.hits == four.estimate.hits);
  CHECK(one.estimate.hits == many.estimate.hits);
  CHECK(one.edge_open == four.edge_open);
  CHECK(one.edge_open == many.edge_open);
}

TEST_CASE("monte carlo open marginals track the crossing weights") {
  Graph g = gen_path(4);
  CutFamily fam = radial_walls(g, 0);
  double t = 0.9;
  McRun run = run_mc(fam, g, t, 200000, 555);
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edges[e];
    double expect = std::exp(-t * wall_crossing(fam, g, u, v).weight);
    double observed = static_cast<double>(run.edge_open[e]) / 200000.0;
    double sigma = std::sqrt(expect * (1.0 - expect) / 200000.0);
    CHECK(std::fabs(observed - expect) <= 4.0 * sigma);
  }
}

TEST_CASE("decay sandwich on exact nested-wall data is tight") {
  Graph g = gen_path(3);
  CutFamily fam = path3_identity_walls();
  double t = 0.7;
  Kernel tau = two_point_exact(distribution_from_walls(fam, g, t));
  Kernel k = wall_kernel(fam);
  DistanceMatrix dist = distance_matrix(g);

  SandwichReport plain = verify_sandwich(tau, k, g, dist, t, SandwichMode::Plain);
  CHECK(plain.pass);
  CHECK(plain.delta == doctest::Approx(1.0));
  CHECK(plain.min_lower_slack >= -1e-12);
  CHECK(plain.min_lower_slack <= 1e-12);  // the bound is attained
  CHECK(plain.min_upper_slack >= -1e-12);
  CHECK(plain.min_upper_slack <= 1e-12);

  // Same tightness through the square root of the squared kernel.
  Kernel k2 = Kernel::from_function(3, [&](int u, int v) {
    double x = k.at(u, v);
    return x * x;
  });
  SandwichReport rooted = verify_sandwich(tau, k2, g, dist, t, SandwichMode::Sqrt);
  CHECK(rooted.pass);
  CHECK(rooted.delta == doctest::Approx(1.0));
  CHECK(rooted.min_upper_slack >= -1e-12);
  CHECK(rooted.min_upper_slack <= 1e-9);
}

TEST_CASE("decay sandwich accepts monte carlo noise within its interval") {
  Graph g = gen_path(3);
  CutFamily fam = path3_identity_walls();
  double t = 0.5;
  TwoPointEstimate est = two_point_mc(fam, g, t, 50000, 99);
  Kernel k = wall_kernel(fam);
  DistanceMatrix dist = distance_matrix(g);
  SandwichReport rep = verify_sandwich(est.tau, k, g, dist, t, SandwichMode::Plain, &est.ci);
  CHECK(rep.pass);

  // A two-point matrix clamped far below the lower envelope must fail.
  Kernel broken = est.tau;
  broken.at(0, 1) = broken.at(1, 0) = 0.01;
  SandwichReport bad = verify_sandwich(broken, k, g, dist, t, SandwichMode::Plain, &est.ci);
  CHECK_FALSE(bad.pass);
  CHECK(bad.lower_u == 0);
  CHECK(bad.lower_v == 1);
}

TEST_CASE("positive association of increasing edge events") {
  // Independent edges: disjoint events are uncorrelated, no pair is negative.
  PercolationDistribution tri = exhaustive_bernoulli(gen_cycle(3), 0.4);
  FkgReport rep = fkg_check_exact(tri, {{0}, {1}, {0, 1}});
  CHECK(rep.min_covariance >= -1e-12);
  FkgReport disjoint = fkg_check_exact(tri, {{0}, {1}});
  CHECK(std::fabs(disjoint.min_covariance) <= 1e-15);

  // A shared cut couples far-apart edges positively.
  Graph p4 = gen_path(4);
  CutFamily shared(4, {Cut{{1, 2}, 1.0}});  // crosses edges (0,1) and (2,3)
  PercolationDistribution d = distribution_from_walls(shared, p4, 1.0);
  FkgReport coupled = fkg_check_exact(d, {{0}, {2}});
  double q = std::exp(-1.0);
  CHECK(coupled.min_covariance == doctest::Approx(q - q * q).epsilon(1e-12));

  CHECK_ERR(fkg_check_exact(tri, {{5}}), Err::NonIncreasingEvent);
  CHECK_ERR(fkg_check_exact(tri, {{-1}}), Err::NonIncreasingEvent);
}

TEST_CASE("cluster decomposition of a single edge") {
  PercolationDistribution d = exhaustive_bernoulli(gen_path(2), 0.3);
  CutFamily fam = cut_decomposition(d, {0, 1});
  REQUIRE(fam.size() == 1);
  CHECK(fam.cut(0).members == std::vector<int>{1});
  CHECK(fam.cut(0).weight == doctest::Approx(0.7).epsilon(1e-15));
  Kernel k = wall_kernel(fam);
  Kernel tau = two_point_exact(d);
  CHECK(std::fabs(k.at(0, 1) - (1.0 - tau.at(0, 1))) <= 1e-15);
}

TEST_CASE("cluster decomposition reproduces one minus the two-point function") {
  std::mt19937 mt(777);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 3 + trial % 4;
    Graph g = testutil::random_connected_graph(n, 2, mt);
    PercolationDistribution d;
    if (trial % 2 == 0) {
      d = exhaustive_bernoulli(g, 0.2 + 0.1 * trial);
    } else {
      CutFamily walls = testutil::random_cut_family(n, 4, mt);
      d = distribution_from_walls(walls, g, 0.5);
    }
    std::vector<int> order(n);
    for (int v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), mt);
    CutFamily fam = cut_decomposition(d, order);
    Kernel k = wall_kernel(fam);
    Kernel tau = two_point_exact(d);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        CHECK(std::fabs(k.at(u, v) - (u == v ? 0.0 : 1.0 - tau.at(u, v))) <= 1e-12);

    // The family itself is order-free: clusters are collected per atom either way.
    std::vector<int> reversed(order.rbegin(), order.rend());
    CutFamily again = cut_decomposition(d, reversed);
    REQUIRE(again.size() == fam.size());
    for (int c = 0; c < fam.size(); ++c) {
      CHECK(again.cut(c).members == fam.cut(c).members);
      CHECK(again.cut(c).weight == fam.cut(c).weight);
    }
  }
}

TEST_CASE("cluster decomposition drops the all-open mass and validates the order") {
  PercolationDistribution open = exhaustive_bernoulli(gen_cycle(3), 1.0);
  CHECK(cut_decomposition(open, {0, 1, 2}).size() == 0);

  PercolationDistribution d = exhaustive_bernoulli(gen_path(3), 0.5);
  CHECK_ERR(cut_decomposition(d, {0, 1}), Err::BadPermutation);
  CHECK_ERR(cut_decomposition(d, {0, 1, 1}), Err::BadPermutation);
  CHECK_ERR(cut_decomposition(d, {0, 1, 3}), Err::BadPermutation);
}
