#include "wallperc/cutcone.hpp"

#include <cmath>
#include <string>

#include "wallperc/error.hpp"
#include "wallperc/lp.hpp"

namespace wallperc {

int pair_index(int n, int u, int v) {
  // pairs (0,1), (0,2), ..., (0,n-1), (1,2), ... in lexicographic order
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

CutConeResult cut_cone_membership(const Kernel& k, double tol) {
  int n = k.n();
  if (n > 14) fail(Err::TooLarge, "cut cone LP capped at 14 points, got " + std::to_string(n));
  if (n < 2) fail(Err::TooLarge, "cut cone membership needs at least 2 points");
  if (k.asymmetry() > 1e-12) fail(Err::NonSymmetric, "kernel must be symmetric");
  for (int i = 0; i < n; ++i)
    if (std::fabs(k.at(i, i)) > 1e-12) fail(Err::NonzeroDiagonal, "kernel diagonal must vanish");

  const int rows = n * (n - 1) / 2;
  const int cols = (1 << (n - 1)) - 1;  // canonical cuts: nonempty subsets avoiding vertex 0

  std::vector<double> a(static_cast<std::size_t>(rows) * cols, 0.0);
  std::vector<double> b(rows);
  std::vector<double> c(cols, 1.0);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) b[pair_index(n, u, v)] = k.at(u, v);

  // Cut with id s (1-based bitmask over vertices 1..n-1): member v iff bit
  // v-1 of s is set.
  for (int s = 1; s <= cols; ++s) {
    int col = s - 1;
    for (int u = 0; u < n; ++u) {
      bool in_u = u > 0 && ((s >> (u - 1)) & 1);
      for (int v = u + 1; v < n; ++v) {
        bool in_v = ((s >> (v - 1)) & 1);
        if (in_u != in_v) a[static_cast<std::size_t>(pair_index(n, u, v)) * cols + col] = 1.0;
      }
    }
  }

  auto lp = simplex_solve(a, rows, cols, b, c, tol);
  CutConeResult out;
  if (lp.status == LpStatus::Infeasible) {
    out.feasible = false;
    out.certificate = lp.farkas;
    out.certificate_value = 0.0;
    for (int r = 0; r < rows; ++r) out.certificate_value += lp.farkas[r] * b[r];
    return out;
  }
  // min-total-weight LP over a cone is never unbounded
  out.feasible = true;
  std::vector<Cut> cuts;
  for (int s = 1; s <= cols; ++s) {
    double w = lp.x[s - 1];
    if (w <= 1e-12) continue;
    Cut cut;
    cut.weight = w;
    for (int v = 1; v < n; ++v)
      if ((s >> (v - 1)) & 1) cut.members.push_back(v);
    cuts.push_back(std::move(cut));
  }
  out.family = CutFamily(n, std::move(cuts));
  out.total_weight = lp.objective;
  Kernel recon = wall_kernel(out.family);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      out.reconstruction_error = std::max(out.reconstruction_error, std::fabs(recon.at(u, v) - k.at(u, v)));
  return out;
}

}  // namespace wallperc
