#pragma once

#include <vector>

#include "wallperc/kernel.hpp"
#include "wallperc/walls.hpp"

namespace wallperc {

struct CutConeResult {
  bool feasible = false;
  // Feasible: nonnegative cut weights reproducing the kernel.
  CutFamily family;
  double reconstruction_error = 0.0;  // max entrywise |wall_kernel - k|
  double total_weight = 0.0;
  // Infeasible: pair multipliers y (indexed like pair_index) with
  // sum_S y . cut_S <= 0 for every canonical cut yet y . k > 0.
  std::vector<double> certificate;
  double certificate_value = 0.0;
};

// Row index of the unordered pair (u,v), u < v, in the LP constraint order.
int pair_index(int n, int u, int v);

// Decides membership of a kernel in the cone of nonnegative cut combinations
// by linear programming over all 2^(n-1)-1 canonical cuts, minimizing total
// weight. n <= 14.
CutConeResult cut_cone_membership(const Kernel& k, double tol = 1e-9);

}  // namespace wallperc
