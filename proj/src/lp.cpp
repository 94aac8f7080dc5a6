#include "wallperc/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace wallperc {

namespace {

// Dense tableau over cols real + rows0 artificial columns, rhs last. The live
// row count m can shrink when redundant rows are dropped after phase 1; the
// stride stays fixed.
struct Tableau {
  int m = 0;        // live constraint rows
  int n = 0;        // real columns
  int total = 0;    // real + artificial columns
  int stride = 0;   // total + 1
  std::vector<double> t;
  std::vector<int> basis;

  Tableau(int rows, int cols)
      : m(rows), n(cols), total(cols + rows), stride(cols + rows + 1),
        t(static_cast<std::size_t>(rows) * (cols + rows + 1), 0.0), basis(rows, 0) {}

  double& at(int i, int j) { return t[static_cast<std::size_t>(i) * stride + j]; }
  double at(int i, int j) const { return t[static_cast<std::size_t>(i) * stride + j]; }
  double& rhs(int i) { return at(i, total); }

  void pivot(int pr, int pc) {
    double inv = 1.0 / at(pr, pc);
    for (int j = 0; j < stride; ++j) at(pr, j) *= inv;
    at(pr, pc) = 1.0;
    for (int i = 0; i < m; ++i) {
      if (i == pr) continue;
      double f = at(i, pc);
      if (f == 0.0) continue;
      for (int j = 0; j < stride; ++j) at(i, j) -= f * at(pr, j);
      at(i, pc) = 0.0;
    }
    basis[pr] = pc;
  }
};

// Bland's rule iteration for min cost'x; cost indexes all total columns.
// Returns false when unbounded.
bool run_simplex(Tableau& tb, const std::vector<double>& cost, bool allow_artificial, double tol) {
  std::vector<double> y(tb.m);
  std::vector<char> is_basic(tb.total, 0);
  for (;;) {
    for (int i = 0; i < tb.m; ++i) y[i] = cost[tb.basis[i]];
    std::fill(is_basic.begin(), is_basic.end(), 0);
    for (int i = 0; i < tb.m; ++i) is_basic[tb.basis[i]] = 1;

    int limit = allow_artificial ? tb.total : tb.n;
    int enter = -1;
    for (int j = 0; j < limit; ++j) {
      if (is_basic[j]) continue;
      double r = cost[j];
      for (int i = 0; i < tb.m; ++i) r -= y[i] * tb.at(i, j);
      if (r < -tol) {
        enter = j;  // smallest index wins
        break;
      }
    }
    if (enter < 0) return true;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < tb.m; ++i) {
      double coef = tb.at(i, enter);
      if (coef > tol) {
        double ratio = tb.rhs(i) / coef;
        if (leave < 0 || ratio < best - 1e-15 ||
            (std::fabs(ratio - best) <= 1e-15 && tb.basis[i] < tb.basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    tb.pivot(leave, enter);
  }
}

}  // namespace

LpResult simplex_solve(const std::vector<double>& a, int rows, int cols,
                       const std::vector<double>& b, const std::vector<double>& c, double tol) {
  if (a.size() != static_cast<std::size_t>(rows) * cols || static_cast<int>(b.size()) != rows ||
      static_cast<int>(c.size()) != cols)
    throw std::invalid_argument("simplex_solve: dimension mismatch");

  Tableau tb(rows, cols);
  for (int i = 0; i < rows; ++i) {
    double sign = (b[i] < 0.0) ? -1.0 : 1.0;
    for (int j = 0; j < cols; ++j) tb.at(i, j) = sign * a[static_cast<std::size_t>(i) * cols + j];
    tb.at(i, cols + i) = 1.0;
    tb.rhs(i) = sign * b[i];
    tb.basis[i] = cols + i;
  }

  // Phase 1: minimize the artificial mass.
  std::vector<double> cost1(tb.total, 0.0);
  for (int r = 0; r < rows; ++r) cost1[cols + r] = 1.0;
  run_simplex(tb, cost1, true, tol);

  double infeas = 0.0;
  for (int i = 0; i < tb.m; ++i)
    if (tb.basis[i] >= cols) infeas += tb.rhs(i);

  LpResult out;
  if (infeas > tol) {
    out.status = LpStatus::Infeasible;
    // y = cB' B^{-1}; B^{-1} sits under the artificial columns. Report the
    // certificate against the original row orientation (undo sign flips).
    out.farkas.assign(rows, 0.0);
    for (int r = 0; r < rows; ++r) {
      double yr = 0.0;
      for (int i = 0; i < tb.m; ++i)
        if (tb.basis[i] >= cols) yr += tb.at(i, cols + r);
      out.farkas[r] = (b[r] < 0.0) ? -yr : yr;
    }
    out.objective = infeas;
    return out;
  }

  // Pivot leftover zero-value artificials out; rows that cannot pivot are
  // redundant and are dropped.
  for (int i = tb.m - 1; i >= 0; --i) {
    if (tb.basis[i] < cols) continue;
    int pc = -1;
    for (int j = 0; j < cols; ++j)
      if (std::fabs(tb.at(i, j)) > tol) {
        pc = j;
        break;
      }
    if (pc >= 0) {
      tb.pivot(i, pc);
      continue;
    }
    int last = tb.m - 1;
    if (i != last) {
      for (int j = 0; j < tb.stride; ++j) tb.at(i, j) = tb.at(last, j);
      tb.basis[i] = tb.basis[last];
    }
    tb.basis.pop_back();
    tb.m -= 1;
  }

  std::vector<double> cost2(tb.total, 0.0);
  for (int j = 0; j < cols; ++j) cost2[j] = c[j];
  if (!run_simplex(tb, cost2, false, tol)) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  out.status = LpStatus::Optimal;
  out.x.assign(cols, 0.0);
  for (int i = 0; i < tb.m; ++i)
    if (tb.basis[i] < cols) out.x[tb.basis[i]] = tb.rhs(i);
  out.objective = 0.0;
  for (int j = 0; j < cols; ++j) out.objective += c[j] * out.x[j];
  return out;
}

}  // namespace wallperc
