#include <doctest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"
#include "wallperc/compression.hpp"
#include "wallperc/cutcone.hpp"
#include "wallperc/error.hpp"
#include "wallperc/percolation.hpp"

using namespace wallperc;

namespace {

Kernel exponential_tau(const DistanceMatrix& dist, double rate, double power = 1.0) {
  return Kernel::from_function(dist.n, [&](int u, int v) {
    return std::exp(-rate * std::pow(double(dist.at(u, v)), power));
  });
}

}  // namespace

TEST_CASE("pure exponential decay fits with matching rates") {
  DistanceMatrix dist = distance_matrix(gen_path(5));
  Kernel tau = exponential_tau(dist, 0.3);
  FitResult fit = fit_stretched_exponential(tau, dist, 1.0, 2.5);
  CHECK_FALSE(fit.degenerate);
  CHECK(fit.alpha == 1.0);
  CHECK(fit.t == 2.5);
  CHECK(fit.beta == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.gamma == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);

  // Both envelopes really hold pointwise.
  for (int u = 0; u < 5; ++u)
    for (int v = u + 1; v < 5; ++v) {
      double d = dist.at(u, v);
      CHECK(std::exp(-fit.beta * d) <= tau.at(u, v) + 1e-12);
      CHECK(tau.at(u, v) <= std::exp(-fit.gamma * std::pow(d, fit.alpha)) + 1e-12);
    }
}

TEST_CASE("square-root decay fits exactly at alpha one half") {
  DistanceMatrix dist = distance_matrix(gen_path(10));
  Kernel tau = exponential_tau(dist, 1.0, 0.5);
  FitResult fit = fit_stretched_exponential(tau, dist, 0.5);
  CHECK(fit.beta == doctest::Approx(1.0).epsilon(1e-12));  // tightest at distance 1
  CHECK(fit.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.C == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.residual <= 1e-12);
}

TEST_CASE("scaling the exponent scales both rates") {
  DistanceMatrix dist = distance_matrix(gen_path(6));
  Kernel tau = exponential_tau(dist, 0.4);
  Kernel tau_sq = Kernel::from_function(6, [&](int u, int v) {
    double x = tau.at(u, v);
    return x * x;
  });
  FitResult base = fit_stretched_exponential(tau, dist, 1.0);
  FitResult doubled = fit_stretched_exponential(tau_sq, dist, 1.0);
  CHECK(doubled.beta == doctest::Approx(2.0 * base.beta).epsilon(1e-10));
  CHECK(doubled.gamma == doctest::Approx(2.0 * base.gamma).epsilon(1e-10));
}

TEST_CASE("confidence intervals push the fit conservative") {
  DistanceMatrix dist = distance_matrix(gen_path(5));
  Kernel tau = exponential_tau(dist, 0.3);
  Kernel ci(5, 0.01);
  FitResult exact = fit_stretched_exponential(tau, dist, 1.0);
  FitResult banded = fit_stretched_exponential(tau, dist, 1.0, 0.0, &ci);
  CHECK(banded.beta > exact.beta);
  CHECK(banded.gamma < exact.gamma);
  CHECK(banded.C > exact.C);
  CHECK(banded.residual <= 1e-12);
}

TEST_CASE("fit input validation and degeneracy") {
  DistanceMatrix dist = distance_matrix(gen_path(3));
  Kernel tau = exponential_tau(dist, 0.3);
  CHECK_ERR(fit_stretched_exponential(tau, dist, -0.1), Err::BadAlpha);
  CHECK_ERR(fit_stretched_exponential(tau, dist, 1.5), Err::BadAlpha);
  CHECK_ERR(fit_stretched_exponential(tau, distance_matrix(gen_path(4)), 1.0), Err::SizeMismatch);

  Kernel dead = tau;
  dead.at(0, 2) = dead.at(2, 0) = 0.0;
  CHECK_ERR(fit_stretched_exponential(dead, dist, 1.0), Err::ZeroTwoPoint);

  Kernel flat(3, 1.0);
  FitResult fit = fit_stretched_exponential(flat, dist, 1.0);
  CHECK(fit.degenerate);
  CHECK(fit.gamma == 0.0);
  CHECK(fit.C == 0.0);
  CHECK_FALSE(fit.diagnostic.empty());

  // One pinned pair is enough to kill the decay rate.
  Kernel pinned = tau;
  pinned.at(0, 1) = pinned.at(1, 0) = 1.0;
  CHECK(fit_stretched_exponential(pinned, dist, 1.0).degenerate);
}

TEST_CASE("alpha estimation saturates at one for pure exponentials") {
  DistanceMatrix dist = distance_matrix(gen_path(6));
  std::vector<std::pair<double, Kernel>> sweep;
  for (double t : {0.5, 1.0, 2.0}) sweep.push_back({t, exponential_tau(dist, t)});
  AlphaEstimate est = estimate_alpha(sweep, dist, 10.0);
  CHECK(est.feasible);
  CHECK_FALSE(est.degenerate);
  CHECK(est.alpha_hat == 1.0);
  REQUIRE(est.grid.size() == 21);
  CHECK(est.grid.front().first == 0.0);
  CHECK(est.grid.back().first == 1.0);
  // The fit constant is nondecreasing along the grid.
  for (std::size_t i = 1; i < est.grid.size(); ++i)
    CHECK(est.grid[i].second >= est.grid[i - 1].second - 1e-12);
}

TEST_CASE("alpha estimation localizes the feasibility boundary") {
  DistanceMatrix dist = distance_matrix(gen_path(10));  // max distance 9
  std::vector<std::pair<double, Kernel>> sweep{{1.0, exponential_tau(dist, 1.0, 0.5)}};

  // Fit constant along alpha is max(1, 9^(alpha - 1/2)); the cap crossing
  // sits at alpha = 1/2 + ln(cap)/ln(9).
  AlphaEstimate tight = estimate_alpha(sweep, dist, 1.0);
  CHECK(tight.feasible);
  CHECK(std::fabs(tight.alpha_hat - 0.5) <= 2e-3);

  AlphaEstimate mid = estimate_alpha(sweep, dist, 2.0);
  CHECK(std::fabs(mid.alpha_hat - (0.5 + std::log(2.0) / std::log(9.0))) <= 2e-3);

  AlphaEstimate loose = estimate_alpha(sweep, dist, 3.0);
  CHECK(loose.alpha_hat == 1.0);

  // Monotone in the cap.
  CHECK(tight.alpha_hat <= mid.alpha_hat);
  CHECK(mid.alpha_hat <= loose.alpha_hat);

  // A cap below the alpha = 0 constant leaves nothing feasible.
  AlphaEstimate none = estimate_alpha(sweep, dist, 0.5);
  CHECK_FALSE(none.feasible);
  CHECK_FALSE(none.degenerate);
  CHECK_FALSE(none.diagnostic.empty());
}

TEST_CASE("alpha estimation reports fully degenerate sweeps") {
  DistanceMatrix dist = distance_matrix(gen_path(4));
  std::vector<std::pair<double, Kernel>> sweep{{0.0, Kernel(4, 1.0)}};
  AlphaEstimate est = estimate_alpha(sweep, dist, 10.0);
  CHECK(est.degenerate);
  CHECK_FALSE(est.feasible);

  CHECK_ERR(estimate_alpha({}, dist, 10.0), Err::EmptyGrid);
}

TEST_CASE("dual kernels obey the Lipschitz and growth envelopes") {
  DistanceMatrix dist = distance_matrix(gen_path(8));
  std::vector<Kernel> taus;
  std::vector<double> gammas;
  for (int m = 1; m <= 5; ++m) {
    double g = std::pow(2.0, -m);
    gammas.push_back(g);
    taus.push_back(exponential_tau(dist, g));
  }
  DualKernelReport rep = dual_kernel(taus, gammas, dist, 1.0, 1.0);
  REQUIRE(rep.kernels.size() == 5);
  double dmax = dist.max();
  for (std::size_t i = 0; i < rep.kernels.size(); ++i) {
    // (1-exp(-x)) <= x makes the rescaled complement 1-Lipschitz...
    CHECK(rep.lipschitz_excess[i] >= 0.0);  // attained on the diagonal
    CHECK(rep.lipschitz_excess[i] <= 1e-12);
    // ...and x-1+exp(-x) <= x^2/2 bounds how far it sags below the distance.
    CHECK(rep.growth_deficit[i] >= 0.0);
    CHECK(rep.growth_deficit[i] <= gammas[i] * dmax * dmax / 2.0 + 1e-12);
    for (int u = 0; u < 8; ++u) CHECK(rep.kernels[i].at(u, u) == 0.0);
  }
  // Later (smaller-gamma) kernels hug the distance more closely.
  for (std::size_t i = 1; i < rep.kernels.size(); ++i)
    CHECK(rep.growth_deficit[i] <= rep.growth_deficit[i - 1] + 1e-12);
}

TEST_CASE("dual kernels of an exact wall model stay inside the cut cone") {
  Graph g = gen_path(6);
  DistanceMatrix dist = distance_matrix(g);
  CutFamily walls = radial_walls(g, 0);
  Kernel tau = two_point_exact(distribution_from_walls(walls, g, 1.0));
  double gamma = 0.25;
  DualKernelReport rep = dual_kernel({tau}, {gamma}, dist, 1.0, 4.0);
  CutConeResult cone = cut_cone_membership(rep.kernels[0]);
  CHECK(cone.feasible);
  CHECK(cone.reconstruction_error <= 1e-7);
}

TEST_CASE("dual kernel input validation") {
  DistanceMatrix dist = distance_matrix(gen_path(3));
  Kernel tau = exponential_tau(dist, 0.5);
  CHECK_ERR(dual_kernel({tau}, {0.5, 0.25}, dist, 1.0, 1.0), Err::SizeMismatch);
  CHECK_ERR(dual_kernel({}, {}, dist, 1.0, 1.0), Err::EmptyGrid);
  CHECK_ERR(dual_kernel({tau}, {0.0}, dist, 1.0, 1.0), Err::NonpositiveGamma);
  CHECK_ERR(dual_kernel({tau}, {-0.5}, dist, 1.0, 1.0), Err::NonpositiveGamma);
  CHECK_ERR(dual_kernel({exponential_tau(distance_matrix(gen_path(4)), 0.5)}, {0.5}, dist, 1.0, 1.0),
            Err::SizeMismatch);
}
