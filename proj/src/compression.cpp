#include "wallperc/compression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wallperc/error.hpp"

namespace wallperc {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

FitResult fit_stretched_exponential(const Kernel& tau, const DistanceMatrix& dist, double alpha,
                                    double t, const Kernel* ci) {
  int n = tau.n();
  if (dist.n != n) fail(Err::SizeMismatch, "two-point and distance sizes differ");
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(Err::BadAlpha, "alpha must lie in [0,1]");

  FitResult fit;
  fit.alpha = alpha;
  fit.t = t;

  std::vector<std::pair<int, int>> zero_pairs;
  double beta = 0.0;
  double gamma = std::numeric_limits<double>::infinity();
  bool any_pair = false;
  bool stuck_at_one = false;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      any_pair = true;
      double d = dist.at(u, v);
      double lo = clamp01(tau.at(u, v) - (ci ? ci->at(u, v) : 0.0));
      double hi = clamp01(tau.at(u, v) + (ci ? ci->at(u, v) : 0.0));
      if (lo <= 0.0) {
        zero_pairs.push_back({u, v});
        continue;
      }
      beta = std::max(beta, -std::log(lo) / d);
      double rho = std::pow(d, alpha);
      double g = -std::log(hi) / rho;
      gamma = std::min(gamma, g);
      if (hi >= 1.0) stuck_at_one = true;
    }
  if (!zero_pairs.empty()) {
    std::string msg = "two-point vanishes at finite distance:";
    for (auto [u, v] : zero_pairs) {
      msg += " (" + std::to_string(u) + "," + std::to_string(v) + ")";
      if (msg.size() > 160) {
        msg += " ...";
        break;
      }
    }
    fail(Err::ZeroTwoPoint, msg);
  }
  if (!any_pair) {
    fit.degenerate = true;
    fit.diagnostic = "no off-diagonal pairs to fit";
    return fit;
  }
  fit.beta = beta;
  fit.gamma = (gamma == std::numeric_limits<double>::infinity()) ? 0.0 : gamma;
  if (stuck_at_one || fit.gamma <= 0.0) {
    fit.degenerate = true;
    fit.gamma = 0.0;
    fit.C = 0.0;
    fit.diagnostic = "no positive decay rate: some off-diagonal two-point value is 1";
    return fit;
  }
  fit.C = fit.beta / fit.gamma;

  double worst = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      double d = dist.at(u, v);
      double lo = clamp01(tau.at(u, v) - (ci ? ci->at(u, v) : 0.0));
      double hi = clamp01(tau.at(u, v) + (ci ? ci->at(u, v) : 0.0));
      worst = std::max(worst, std::exp(-fit.beta * d) - lo);
      worst = std::max(worst, hi - std::exp(-fit.gamma * std::pow(d, alpha)));
    }
  fit.residual = worst;
  return fit;
}

AlphaEstimate estimate_alpha(const std::vector<std::pair<double, Kernel>>& sweep,
                             const DistanceMatrix& dist, double cap,
                             const std::vector<const Kernel*>* cis) {
  if (sweep.empty()) fail(Err::EmptyGrid, "alpha estimation needs at least one two-point matrix");
  if (cis && cis->size() != sweep.size()) fail(Err::SizeMismatch, "ci list size differs from sweep");

  // best (smallest) fit constant across the t-grid; +inf when every fit is
  // degenerate at this alpha
  auto best_c = [&](double alpha, bool* all_degenerate) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < sweep.size(); ++i) {
      auto fit = fit_stretched_exponential(sweep[i].second, dist, alpha, sweep[i].first,
                                           cis ? (*cis)[i] : nullptr);
      if (fit.degenerate) continue;
      any = true;
      best = std::min(best, fit.C);
    }
    if (all_degenerate) *all_degenerate = !any;
    return best;
  };

  AlphaEstimate est;
  // Degeneracy does not depend on alpha: it means some off-diagonal
  // two-point value is pinned at 1 for every t.
  bool deg = false;
  best_c(0.0, &deg);
  if (deg) {
    est.degenerate = true;
    est.diagnostic = "every fit is degenerate: the two-point matrices show no decay";
    return est;
  }

  int last_feasible = -1;
  for (int i = 0; i <= 20; ++i) {
    double alpha = std::min(1.0, 0.05 * i);
    double c = best_c(alpha, nullptr);
    est.grid.push_back({alpha, c});
    if (c <= cap) last_feasible = i;
  }
  if (last_feasible < 0) {
    est.feasible = false;
    est.diagnostic = "no alpha on the grid fits under the cap";
    return est;
  }
  est.feasible = true;
  if (last_feasible == 20) {
    est.alpha_hat = 1.0;
    return est;
  }
  // The fit constant is nondecreasing in alpha, so the feasibility boundary
  // sits between the last feasible and the first infeasible grid point.
  double lo = est.grid[last_feasible].first;
  double hi = est.grid[last_feasible + 1].first;
  while (hi - lo > 1e-3) {
    double mid = 0.5 * (lo + hi);
    if (best_c(mid, nullptr) <= cap)
      lo = mid;
    else
      hi = mid;
  }
  est.alpha_hat = lo;
  return est;
}

DualKernelReport dual_kernel(const std::vector<Kernel>& taus, const std::vector<double>& gammas,
                             const DistanceMatrix& dist, double alpha, double C) {
  if (taus.size() != gammas.size()) fail(Err::SizeMismatch, "tau list and gamma list sizes differ");
  if (taus.empty()) fail(Err::EmptyGrid, "dual kernel needs at least one two-point matrix");
  for (double g : gammas)
    if (!(g > 0.0)) fail(Err::NonpositiveGamma, "every gamma must be positive");
  int n = dist.n;
  for (const auto& tau : taus)
    if (tau.n() != n) fail(Err::SizeMismatch, "two-point size differs from distance matrix");

  DualKernelReport rep;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    Kernel k(n, 0.0);
    double excess = -std::numeric_limits<double>::infinity();
    double deficit = -std::numeric_limits<double>::infinity();
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        double val = (1.0 - taus[i].at(u, v)) / gammas[i];
        k.at(u, v) = val;
        double d = dist.at(u, v);
        excess = std::max(excess, val - C * d);
        deficit = std::max(deficit, std::pow(d, alpha) - val);
      }
    rep.kernels.push_back(std::move(k));
    rep.lipschitz_excess.push_back(excess);
    rep.growth_deficit.push_back(deficit);
  }
  return rep;
}

}  // namespace wallperc
