#include "wallperc/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wallperc/eigen.hpp"
#include "wallperc/error.hpp"

namespace wallperc {

Kernel Kernel::from_function(int n, const std::function<double(int, int)>& f) {
  Kernel k(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k.at(i, j) = f(i, j);
  return k;
}

Kernel Kernel::from_distance(const DistanceMatrix& d) {
  Kernel k(d.n);
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j) k.at(i, j) = d.at(i, j);
  return k;
}

double Kernel::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::fabs(x));
  return m;
}

double Kernel::asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) m = std::max(m, std::fabs(at(i, j) - at(j, i)));
  return m;
}

namespace {

void require_symmetric(const Kernel& k) {
  if (k.asymmetry() > 1e-12)
    fail(Err::NonSymmetric, "kernel asymmetry " + std::to_string(k.asymmetry()) + " exceeds 1e-12");
}

void require_cnd_candidate(const Kernel& k) {
  require_symmetric(k);
  for (int i = 0; i < k.n(); ++i)
    if (std::fabs(k.at(i, i)) > 1e-12)
      fail(Err::NonzeroDiagonal, "diagonal entry at " + std::to_string(i) + " is not zero");
  for (int i = 0; i < k.n(); ++i)
    for (int j = 0; j < k.n(); ++j)
      if (k.at(i, j) < -1e-12)
        fail(Err::NegativeEntry,
             "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is negative");
}

// Anchored Gram matrix; row and column 0 vanish identically.
std::vector<double> gram_at_zero(const Kernel& k) {
  int n = k.n();
  std::vector<double> g(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g[static_cast<std::size_t>(i) * n + j] = 0.5 * (k.at(i, 0) + k.at(j, 0) - k.at(i, j));
  return g;
}

double max_abs_of(const std::vector<double>& m) {
  double r = 0.0;
  for (double x : m) r = std::max(r, std::fabs(x));
  return r;
}

}  // namespace

PdReport is_positive_definite(const Kernel& k, double tol) {
  require_symmetric(k);
  auto eig = symmetric_eigen(k.data(), k.n());
  PdReport r;
  r.min_eigenvalue = eig.values.empty() ? 0.0 : eig.values.front();
  r.threshold = -tol * k.n() * k.max_abs();
  r.positive = r.min_eigenvalue >= r.threshold;
  return r;
}

CndReport is_cond_negative_definite(const Kernel& k, double tol) {
  require_cnd_candidate(k);
  int n = k.n();
  auto g = gram_at_zero(k);
  auto eig = symmetric_eigen(g, n);
  CndReport r;
  r.min_gram_eigenvalue = eig.values.empty() ? 0.0 : eig.values.front();
  r.threshold = -tol * n * max_abs_of(g);
  r.negative_definite = r.min_gram_eigenvalue >= r.threshold;
  if (!r.negative_definite) {
    // From an eigenvector x with x'Gx < 0: shift mass onto index 0 so the
    // coefficients sum to zero; G annihilates e_0, so the form survives.
    std::vector<double> a(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      a[i] = eig.vec(i, 0);
      total += a[i];
    }
    a[0] -= total;
    r.witness = std::move(a);
    r.witness_form = cnd_quadratic_form(k, r.witness);
  }
  return r;
}

double cnd_quadratic_form(const Kernel& k, const std::vector<double>& a) {
  if (static_cast<int>(a.size()) != k.n()) fail(Err::SizeMismatch, "coefficient vector size mismatch");
  double s = 0.0;
  for (int i = 0; i < k.n(); ++i)
    for (int j = 0; j < k.n(); ++j) s += a[i] * a[j] * k.at(i, j);
  return s;
}

Kernel schoenberg_transform(const Kernel& k, double lambda) {
  if (!(lambda > 0.0)) fail(Err::NonpositiveLambda, "lambda must be positive");
  require_symmetric(k);
  Kernel out(k.n());
  for (int i = 0; i < k.n(); ++i)
    for (int j = 0; j < k.n(); ++j) out.at(i, j) = std::exp(-lambda * k.at(i, j));
  return out;
}

double PointCloud::distance(int i, int j) const {
  double s = 0.0;
  if (metric == Metric::Euclidean) {
    for (int c = 0; c < dim; ++c) {
      double d = coord(i, c) - coord(j, c);
      s += d * d;
    }
    return std::sqrt(s);
  }
  for (int c = 0; c < dim; ++c) s += std::fabs(coord(i, c) - coord(j, c));
  return s;
}

PointCloud hilbert_embedding(const Kernel& k, double tol) {
  auto cnd = is_cond_negative_definite(k, tol);
  if (!cnd.negative_definite)
    fail(Err::NotCND, "kernel is not conditionally negative definite (min Gram eigenvalue " +
                          std::to_string(cnd.min_gram_eigenvalue) + ")");
  int n = k.n();
  auto g = gram_at_zero(k);
  auto eig = symmetric_eigen(g, n);
  double scale = max_abs_of(g);
  double cut = std::max(tol * n * scale, 0.0);

  std::vector<int> keep;
  for (int j = 0; j < n; ++j)
    if (eig.values[j] > cut) keep.push_back(j);

  PointCloud pc;
  pc.n = n;
  pc.metric = Metric::Euclidean;
  pc.dim = keep.empty() ? 1 : static_cast<int>(keep.size());
  pc.coords.assign(static_cast<std::size_t>(n) * pc.dim, 0.0);
  for (std::size_t c = 0; c < keep.size(); ++c) {
    double root = std::sqrt(eig.values[keep[c]]);
    for (int i = 0; i < n; ++i) pc.coord(i, static_cast<int>(c)) = root * eig.vec(i, keep[c]);
  }
  // pin the anchor exactly at the origin
  for (int c = 0; c < pc.dim; ++c) {
    double base = pc.coord(0, c);
    if (base != 0.0)
      for (int i = 0; i < n; ++i) pc.coord(i, c) -= base;
  }
  return pc;
}

EnvelopePair coarse_envelopes(const Kernel& k, const DistanceMatrix& dist) {
  if (k.n() != dist.n) fail(Err::SizeMismatch, "kernel and distance matrix sizes differ");
  require_symmetric(k);
  EnvelopePair env;
  std::vector<int> radii;
  for (int u = 0; u < k.n(); ++u)
    for (int v = u + 1; v < k.n(); ++v) radii.push_back(dist.at(u, v));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  env.radii = radii;
  env.rho1.assign(radii.size(), 0.0);
  env.rho2.assign(radii.size(), 0.0);
  for (std::size_t s = 0; s < radii.size(); ++s) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int u = 0; u < k.n(); ++u)
      for (int v = u + 1; v < k.n(); ++v) {
        if (dist.at(u, v) != radii[s]) continue;
        double val = k.at(u, v);
        if (first) {
          lo = hi = val;
          first = false;
        } else {
          lo = std::min(lo, val);
          hi = std::max(hi, val);
        }
      }
    env.rho1[s] = lo;
    env.rho2[s] = hi;
  }
  env.proper_looking = true;
  for (std::size_t s = 1; s < env.rho1.size(); ++s)
    if (!(env.rho1[s] > env.rho1[s - 1])) env.proper_looking = false;
  if (env.rho1.empty()) env.proper_looking = false;
  return env;
}

AggregateReport aggregate_pd_to_cnd(const std::vector<Kernel>& kernels,
                                    const std::vector<double>& caps,
                                    const DistanceMatrix& dist, bool strict) {
  if (kernels.size() != caps.size()) fail(Err::SizeMismatch, "kernel list and cap list sizes differ");
  int n = dist.n;
  for (const auto& k : kernels)
    if (k.n() != n) fail(Err::SizeMismatch, "kernel size differs from distance matrix");

  AggregateReport rep;
  rep.kernel = Kernel(n, 0.0);
  int N = static_cast<int>(kernels.size());

  for (int m = 1; m <= N; ++m) {
    const Kernel& km = kernels[m - 1];
    double rcap = caps[m - 1];
    double near_tol = std::pow(2.0, -m);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        double d = dist.at(u, v);
        double val = km.at(u, v);
        rep.kernel.at(u, v) += 1.0 - val;
        if (u >= v) continue;
        if (d <= m && !(std::fabs(val - 1.0) < near_tol))
          rep.violations.push_back({m, u, v, true, val});
        if (d > rcap && !(val < 0.5)) rep.violations.push_back({m, u, v, false, val});
      }
  }
  rep.variation_ok = rep.violations.empty();
  if (strict && !rep.variation_ok) {
    const auto& w = rep.violations.front();
    fail(Err::VariationViolated,
         "kernel " + std::to_string(w.kernel_index) + " violates the " +
             (w.near_clause ? "near" : "far") + " clause at pair (" + std::to_string(w.u) + "," +
             std::to_string(w.v) + "), value " + std::to_string(w.value));
  }

  auto q_of = [&](double d) {
    for (int m = 1; m <= N; ++m)
      if (d <= caps[m - 1]) return m;
    return N + 1;
  };
  rep.upper_worst_slack = std::numeric_limits<double>::infinity();
  rep.lower_worst_slack = std::numeric_limits<double>::infinity();
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      double d = dist.at(u, v);
      double k = rep.kernel.at(u, v);
      double upper_slack = (2.0 * d + 1.0) - k;
      double lower_slack = k - 0.5 * (q_of(d) - 1);
      rep.upper_worst_slack = std::min(rep.upper_worst_slack, upper_slack);
      rep.lower_worst_slack = std::min(rep.lower_worst_slack, lower_slack);
    }
  rep.upper_ok = rep.upper_worst_slack >= -1e-12;
  rep.lower_ok = rep.lower_worst_slack >= -1e-12;
  return rep;
}

}  // namespace wallperc
