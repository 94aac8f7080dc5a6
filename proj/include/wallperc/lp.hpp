#pragma once

#include <vector>

namespace wallperc {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;       // primal solution (Optimal)
  double objective = 0.0;      // c'x at the optimum
  std::vector<double> farkas;  // Infeasible: y with y'A <= 0 componentwise and y'b > 0
};

// Minimizes c'x subject to Ax = b, x >= 0 with a dense two-phase primal
// simplex using Bland's anti-cycling rule. Rows with negative b are flipped
// internally. a is row-major rows x cols.
LpResult simplex_solve(const std::vector<double>& a, int rows, int cols,
                       const std::vector<double>& b, const std::vector<double>& c,
                       double tol = 1e-9);

}  // namespace wallperc
