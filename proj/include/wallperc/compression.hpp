#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wallperc/graph.hpp"
#include "wallperc/kernel.hpp"

namespace wallperc {

struct FitResult {
  double alpha = 1.0;
  double beta = 0.0;   // tightest rate with exp(-beta*d) <= tau everywhere
  double gamma = 0.0;  // tightest rate with tau <= exp(-gamma*d^alpha) everywhere
  double C = 0.0;      // beta/gamma
  double residual = 0.0;  // max violation of either envelope at the fit
  double t = 0.0;
  bool degenerate = false;  // no positive decay rate exists (tau = 1 somewhere off-diagonal)
  std::string diagnostic;
};

// Tight two-sided stretched-exponential envelope of an exact two-point
// matrix. With ci given (Monte Carlo input), beta is fit against tau - ci and
// gamma against tau + ci, the conservative direction for both.
FitResult fit_stretched_exponential(const Kernel& tau, const DistanceMatrix& dist, double alpha,
                                    double t = 0.0, const Kernel* ci = nullptr);

struct AlphaEstimate {
  double alpha_hat = 0.0;
  bool feasible = false;     // some alpha on the grid fits under the cap
  bool degenerate = false;   // every fit degenerate (tau = 1 everywhere)
  std::string diagnostic;
  std::vector<std::pair<double, double>> grid;  // (alpha, best C over t)
};

// Largest alpha in [0,1] whose best fit constant over the t-grid stays under
// the cap: 0.05-step grid scan plus bisection refinement to 1e-3.
AlphaEstimate estimate_alpha(const std::vector<std::pair<double, Kernel>>& sweep,
                             const DistanceMatrix& dist, double cap = 10.0,
                             const std::vector<const Kernel*>* cis = nullptr);

struct DualKernelReport {
  std::vector<Kernel> kernels;            // k_i = (1 - tau_i) / gamma_i
  std::vector<double> lipschitz_excess;   // per index: max over pairs of k_i - C*d
  std::vector<double> growth_deficit;     // per index: max over pairs of d^alpha - k_i
};

// Rescaled complement kernels along a decreasing gamma sequence, with the
// Lipschitz and growth trend diagnostics evaluated against C*d and d^alpha.
DualKernelReport dual_kernel(const std::vector<Kernel>& taus, const std::vector<double>& gammas,
                             const DistanceMatrix& dist, double alpha, double C);

}  // namespace wallperc
