#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "test_util.hpp"
#include "wallperc/error.hpp"
#include "wallperc/kernel.hpp"

using namespace wallperc;

namespace {

// Exhaustive small-integer probe: the largest quadratic form over coefficient
// vectors a in {-2,...,2}^n with sum a = 0. Positive values refute conditional
// negativity; for kernels built to be CND every probe must be <= 0.
double brute_force_max_form(const Kernel& k) {
  int n = k.n();
  double best = -1e300;
  std::vector<double> a(n, 0.0);
  long long total = 1;
  for (int i = 0; i < n; ++i) total *= 5;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    int sum = 0;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      int digit = static_cast<int>(c % 5) - 2;
      c /= 5;
      a[i] = digit;
      sum += digit;
      nonzero = nonzero || digit != 0;
    }
    if (sum != 0 || !nonzero) continue;
    best = std::max(best, cnd_quadratic_form(k, a));
  }
  return best;
}

Kernel cubic_kernel(int n, double h) {
  return Kernel::from_function(n, [&](int i, int j) {
    double d = h * std::abs(i - j);
    return d * d * d;
  });
}

double embedding_round_trip_error(const Kernel& k, const PointCloud& pc) {
  double worst = 0.0;
  for (int i = 0; i < k.n(); ++i)
    for (int j = 0; j < k.n(); ++j) {
      double d = pc.distance(i, j);
      worst = std::max(worst, std::fabs(d * d - k.at(i, j)));
    }
  return worst;
}

}  // namespace

TEST_CASE("positive definiteness report") {
  Kernel id = Kernel::from_function(3, [](int i, int j) { return i == j ? 1.0 : 0.0; });
  CHECK(is_positive_definite(id).positive);

  Kernel ones(3, 1.0);
  PdReport r1 = is_positive_definite(ones);
  CHECK(r1.positive);  // min eigenvalue 0 sits above the negative threshold

  Kernel bad(2, 2.0);
  bad.at(0, 0) = bad.at(1, 1) = 1.0;
  PdReport r2 = is_positive_definite(bad);
  CHECK_FALSE(r2.positive);
  CHECK(r2.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));

  Kernel asym(2, 0.0);
  asym.at(0, 1) = 1.0;
  asym.at(1, 0) = 2.0;
  CHECK_ERR(is_positive_definite(asym), Err::NonSymmetric);
}

TEST_CASE("conditional negativity of line metrics and powers") {
  // |x-y| and |x-y|^2 on collinear points are conditionally negative.
  Kernel lin = Kernel::from_function(4, [](int i, int j) { return std::abs(i - j); });
  CHECK(is_cond_negative_definite(lin).negative_definite);
  Kernel sq = Kernel::from_function(4, [](int i, int j) { return double((i - j) * (i - j)); });
  CHECK(is_cond_negative_definite(sq).negative_definite);

  // |x-y|^3 on {0,1,2} is not; the classic coefficient pattern (1,-2,1)
  // produces the exact form value 8.
  Kernel cubic = cubic_kernel(3, 1.0);
  CHECK(cnd_quadratic_form(cubic, {1.0, -2.0, 1.0}) == 8.0);
  CndReport rep = is_cond_negative_definite(cubic);
  CHECK_FALSE(rep.negative_definite);
  REQUIRE(rep.witness.size() == 3);
  double wsum = rep.witness[0] + rep.witness[1] + rep.witness[2];
  double wmag = std::fabs(rep.witness[0]) + std::fabs(rep.witness[1]) + std::fabs(rep.witness[2]);
  CHECK(std::fabs(wsum) <= 1e-9 * wmag);
  CHECK(rep.witness_form > 0.0);
}

TEST_CASE("conditional negativity input validation") {
  Kernel diag(2, 0.0);
  diag.at(0, 0) = 1.0;
  CHECK_ERR(is_cond_negative_definite(diag), Err::NonzeroDiagonal);

  Kernel neg(2, 0.0);
  neg.at(0, 1) = neg.at(1, 0) = -1.0;
  CHECK_ERR(is_cond_negative_definite(neg), Err::NegativeEntry);

  Kernel asym(2, 0.0);
  asym.at(0, 1) = 1.0;
  asym.at(1, 0) = 2.0;
  CHECK_ERR(is_cond_negative_definite(asym), Err::NonSymmetric);

  CHECK_ERR(cnd_quadratic_form(Kernel(3, 0.0), {1.0, -1.0}), Err::SizeMismatch);
}

TEST_CASE("brute-force sign patterns agree with the spectral test") {
  std::mt19937 rng(4242);

  // Squared Euclidean distances are conditionally negative: the spectral test
  // accepts and no sign pattern finds a positive form.
  for (int trial = 0; trial < 5; ++trial) {
    Kernel k = testutil::random_squared_distance_kernel(6, 3, rng);
    CHECK(is_cond_negative_definite(k).negative_definite);
    CHECK(brute_force_max_form(k) <= 1e-8 * (1.0 + k.max_abs()));
  }

  // Cubed equally-spaced line distances are not: the spectral test refuses
  // and the (1,-2,1) pattern hands the brute force a provably positive form.
  for (int n : {3, 4, 5, 6}) {
    for (double h : {0.5, 1.0, 1.7}) {
      Kernel k = cubic_kernel(n, h);
      CndReport rep = is_cond_negative_definite(k);
      CHECK_FALSE(rep.negative_definite);
      double bf = brute_force_max_form(k);
      CHECK(bf >= 8.0 * h * h * h - 1e-9);
      CHECK(rep.witness_form > 0.0);
    }
  }
}

TEST_CASE("entrywise exponential transform") {
  CHECK_ERR(schoenberg_transform(Kernel(2, 0.0), 0.0), Err::NonpositiveLambda);
  CHECK_ERR(schoenberg_transform(Kernel(2, 0.0), -1.0), Err::NonpositiveLambda);

  // Zero kernel maps to all-ones.
  Kernel z = schoenberg_transform(Kernel(3, 0.0), 2.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(z.at(i, j) == 1.0);

  // CND inputs give positive definite outputs at every rate.
  std::mt19937 rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    Kernel k = testutil::random_squared_distance_kernel(5, 2, rng);
    for (double lambda : {0.01, 0.1, 1.0, 10.0})
      CHECK(is_positive_definite(schoenberg_transform(k, lambda)).positive);
  }

  // The cubic counterexample fails at lambda = 0.1; the 3x3 determinant
  // 1 - 2a^2 - b^2 + 2a^2 b with a = exp(-0.1), b = exp(-0.8) is negative,
  // which no positive semidefinite matrix allows.
  Kernel cubic = cubic_kernel(3, 1.0);
  double a = std::exp(-0.1), b = std::exp(-0.8);
  double det = 1.0 - 2.0 * a * a - b * b + 2.0 * a * a * b;
  CHECK(det < 0.0);
  PdReport rep = is_positive_definite(schoenberg_transform(cubic, 0.1));
  CHECK_FALSE(rep.positive);
  CHECK(rep.min_eigenvalue < 0.0);
}

TEST_CASE("hilbert embedding of the path metric") {
  Graph g = gen_path(3);
  Kernel k = Kernel::from_distance(distance_matrix(g));
  PointCloud pc = hilbert_embedding(k);
  CHECK(pc.n == 3);
  CHECK(pc.dim == 2);  // anchored Gram matrix [[1,1],[1,2]] has full rank
  CHECK(pc.metric == Metric::Euclidean);
  for (int c = 0; c < pc.dim; ++c) CHECK(pc.coord(0, c) == 0.0);
  double d02 = pc.distance(0, 2);
  CHECK(d02 * d02 == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(embedding_round_trip_error(k, pc) <= 1e-9 * k.max_abs());
}

TEST_CASE("hilbert embedding rank and degenerate cases") {
  // Squared line distances have a rank-one Gram matrix.
  Kernel sq = Kernel::from_function(3, [](int i, int j) { return double((i - j) * (i - j)); });
  PointCloud line = hilbert_embedding(sq);
  CHECK(line.dim == 1);
  CHECK(embedding_round_trip_error(sq, line) <= 1e-9 * sq.max_abs());

  // Zero kernel: every point at the origin, one padding coordinate.
  PointCloud zero = hilbert_embedding(Kernel(3, 0.0));
  CHECK(zero.dim == 1);
  for (int i = 0; i < 3; ++i) CHECK(zero.coord(i, 0) == 0.0);

  CHECK_ERR(hilbert_embedding(cubic_kernel(3, 1.0)), Err::NotCND);
}

TEST_CASE("hilbert embedding round trip on random CND kernels") {
  std::mt19937 rng(515151);
  for (int trial = 0; trial < 6; ++trial) {
    int n = 3 + trial % 5;
    Kernel k = testutil::random_squared_distance_kernel(n, 1 + trial % 3, rng);
    PointCloud pc = hilbert_embedding(k);
    CHECK(pc.dim <= std::max(1, n - 1));
    CHECK(embedding_round_trip_error(k, pc) <= 1e-9 * std::max(1.0, k.max_abs()));
  }
}

TEST_CASE("shell envelopes") {
  Graph p = gen_path(5);
  DistanceMatrix dp = distance_matrix(p);
  EnvelopePair env = coarse_envelopes(Kernel::from_distance(dp), dp);
  CHECK(env.radii == std::vector<int>{1, 2, 3, 4});
  for (std::size_t s = 0; s < env.radii.size(); ++s) {
    CHECK(env.rho1[s] == doctest::Approx(env.radii[s]));
    CHECK(env.rho2[s] == doctest::Approx(env.radii[s]));
  }
  CHECK(env.proper_looking);

  // Distance to the root of a cycle is not coarsely faithful: antipodal-ish
  // pairs sit far apart in the graph yet carry a small kernel value.
  Graph c = gen_cycle(6);
  DistanceMatrix dc = distance_matrix(c);
  Kernel radial = Kernel::from_function(6, [&](int u, int v) {
    return std::fabs(double(dc.at(0, u) - dc.at(0, v)));
  });
  EnvelopePair ec = coarse_envelopes(radial, dc);
  CHECK(ec.radii == std::vector<int>{1, 2, 3});
  CHECK(ec.rho1 == std::vector<double>{1.0, 0.0, 1.0});
  CHECK(ec.rho2 == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_FALSE(ec.proper_looking);

  // Constant-zero kernel cannot look proper once there are two shells.
  EnvelopePair ez = coarse_envelopes(Kernel(3, 0.0), distance_matrix(gen_path(3)));
  CHECK(ez.rho1 == std::vector<double>{0.0, 0.0});
  CHECK_FALSE(ez.proper_looking);

  CHECK_ERR(coarse_envelopes(Kernel(2, 0.0), dp), Err::SizeMismatch);
}

TEST_CASE("aggregation of normalized kernels: empty list") {
  DistanceMatrix d = distance_matrix(gen_path(4));
  AggregateReport rep = aggregate_pd_to_cnd({}, {}, d);
  CHECK(rep.variation_ok);
  CHECK(rep.upper_ok);
  CHECK(rep.lower_ok);
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) CHECK(rep.kernel.at(u, v) == 0.0);
}

TEST_CASE("aggregation flags a kernel that decays too fast near the diagonal") {
  Graph g = gen_path(3);
  DistanceMatrix d = distance_matrix(g);
  Kernel k1 = Kernel::from_function(3, [&](int u, int v) { return std::exp(-double(d.at(u, v))); });
  AggregateReport rep = aggregate_pd_to_cnd({k1}, {3.0}, d);

  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      CHECK(rep.kernel.at(u, v) ==
            doctest::Approx(1.0 - std::exp(-double(d.at(u, v)))).epsilon(1e-15));

  // exp(-1) sits more than 1/2 away from 1, so both distance-1 pairs are
  // reported against the near clause.
  CHECK_FALSE(rep.variation_ok);
  REQUIRE(rep.violations.size() == 2);
  for (const auto& v : rep.violations) {
    CHECK(v.kernel_index == 1);
    CHECK(v.near_clause);
    CHECK(v.value == doctest::Approx(std::exp(-1.0)));
  }
  CHECK(rep.upper_ok);
  CHECK(rep.lower_ok);

  CHECK_ERR(aggregate_pd_to_cnd({k1}, {3.0}, d, true), Err::VariationViolated);
}

TEST_CASE("aggregation growth bounds on a two-kernel family") {
  Graph g = gen_path(8);
  DistanceMatrix d = distance_matrix(g);
  Kernel k1 = Kernel::from_function(8, [&](int u, int v) { return std::exp(-d.at(u, v) / 8.0); });
  Kernel k2 = Kernel::from_function(8, [&](int u, int v) { return std::exp(-d.at(u, v) / 4.0); });
  AggregateReport rep = aggregate_pd_to_cnd({k1, k2}, {5.0, 7.0}, d);

  // The only variation failures are the distance-2 pairs of the second
  // kernel: |exp(-1/2) - 1| = 0.393 exceeds 2^-2.
  CHECK_FALSE(rep.variation_ok);
  REQUIRE(rep.violations.size() == 6);
  for (const auto& v : rep.violations) {
    CHECK(v.kernel_index == 2);
    CHECK(v.near_clause);
    CHECK(d.at(v.u, v.v) == 2);
  }

  CHECK(rep.upper_ok);
  CHECK(rep.upper_worst_slack == doctest::Approx(1.0));  // diagonal: k = 0 against 2*0+1
  CHECK(rep.lower_ok);
  CHECK(rep.lower_worst_slack == doctest::Approx(0.0));  // diagonal again

  // Distance 6 exceeds the first cap only: the bound there is 1/2.
  double k6 = (1.0 - std::exp(-0.75)) + (1.0 - std::exp(-1.5));
  CHECK(k6 >= 0.5);

  CHECK_ERR(aggregate_pd_to_cnd({k1}, {3.0, 4.0}, d), Err::SizeMismatch);
  CHECK_ERR(aggregate_pd_to_cnd({Kernel(3, 0.0)}, {3.0}, d), Err::SizeMismatch);
}
