#include "wallperc/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wallperc {

SymmetricEigen symmetric_eigen(const std::vector<double>& in, int n) {
  if (n < 0 || in.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("symmetric_eigen: bad dimensions");
  std::vector<double> a = in;
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off == 0.0) break;
    double diag = 0.0;
    for (int p = 0; p < n; ++p) diag += A(p, p) * A(p, p);
    if (off <= 1e-30 * std::max(1.0, diag)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = A(p, q);
        if (apq == 0.0) continue;
        double app = A(p, p), aqq = A(q, q);
        double tau = (aqq - app) / (2.0 * apq);
        double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = t * c;

        A(p, p) = app - t * apq;
        A(q, q) = aqq + t * apq;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(p, k) = A(k, p);
          A(k, q) = s * akp + c * akq;
          A(q, k) = A(k, q);
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  out.n = n;
  out.values.resize(n);
  for (int i = 0; i < n; ++i) out.values[i] = A(i, i);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return out.values[x] < out.values[y]; });
  std::vector<double> sorted_vals(n);
  out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    sorted_vals[k] = out.values[order[k]];
    for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(i) * n + k] = V(i, order[k]);
  }
  out.values = std::move(sorted_vals);
  return out;
}

}  // namespace wallperc
