#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wallperc/graph.hpp"

namespace wallperc {

// Dense symmetric kernel on n points, row-major.
class Kernel {
 public:
  Kernel() = default;
  explicit Kernel(int n, double fill = 0.0) : n_(n), v_(static_cast<std::size_t>(n) * n, fill) {}

  static Kernel from_function(int n, const std::function<double(int, int)>& f);
  static Kernel from_distance(const DistanceMatrix& d);

  int n() const { return n_; }
  double at(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double max_abs() const;
  // largest |k(i,j)-k(j,i)|
  double asymmetry() const;

 private:
  int n_ = 0;
  std::vector<double> v_;
};

struct PdReport {
  bool positive = false;
  double min_eigenvalue = 0.0;
  double threshold = 0.0;  // -tol * n * max|entry|
};

// PSD within a relative spectral tolerance: min eigenvalue >= -tol*n*max|entry|.
PdReport is_positive_definite(const Kernel& k, double tol = 1e-9);

struct CndReport {
  bool negative_definite = false;
  double min_gram_eigenvalue = 0.0;
  double threshold = 0.0;
  // On failure: coefficients summing to zero whose quadratic form
  // sum_ij a_i a_j k(i,j) is strictly positive.
  std::vector<double> witness;
  double witness_form = 0.0;
};

// Checks the anchored Gram matrix G(i,j) = (k(i,0)+k(j,0)-k(i,j))/2 for
// positivity. Requires symmetry, zero diagonal and nonnegative entries.
CndReport is_cond_negative_definite(const Kernel& k, double tol = 1e-9);

// sum_ij a_i a_j k(i,j); the caller is responsible for sum a_i = 0.
double cnd_quadratic_form(const Kernel& k, const std::vector<double>& a);

// Entrywise exp(-lambda * k); lambda must be positive.
Kernel schoenberg_transform(const Kernel& k, double lambda);

enum class Metric { Euclidean, L1 };

struct PointCloud {
  int n = 0;
  int dim = 0;
  Metric metric = Metric::Euclidean;
  std::vector<double> coords;  // row-major n*dim

  double coord(int i, int j) const { return coords[static_cast<std::size_t>(i) * dim + j]; }
  double& coord(int i, int j) { return coords[static_cast<std::size_t>(i) * dim + j]; }
  double distance(int i, int j) const;
};

// Realizes a CND kernel as squared Euclidean distances: k(u,v)=|f(u)-f(v)|^2
// with f(0) at the origin and dim = rank of the anchored Gram matrix.
PointCloud hilbert_embedding(const Kernel& k, double tol = 1e-9);

struct EnvelopePair {
  std::vector<int> radii;   // sorted distinct off-diagonal distances
  std::vector<double> rho1; // per-shell minimum of k
  std::vector<double> rho2; // per-shell maximum of k
  bool proper_looking = false;  // rho1 strictly increasing across shells
};

EnvelopePair coarse_envelopes(const Kernel& k, const DistanceMatrix& dist);

struct VariationViolation {
  int kernel_index = 0;  // 1-based position in the list
  int u = 0, v = 0;
  // which clause failed: true = |k_n - 1| < 2^-n at d <= n, false = k_n < 1/2 at d > R_n
  bool near_clause = true;
  double value = 0.0;
};

struct AggregateReport {
  Kernel kernel;
  bool variation_ok = true;
  std::vector<VariationViolation> violations;
  // k <= 2d+1 entrywise
  bool upper_ok = true;
  double upper_worst_slack = 0.0;
  // k >= (Q(d)-1)/2 with Q(t) = min{ m >= 1 : t <= R_m }, Q = N+1 past every cap
  bool lower_ok = true;
  double lower_worst_slack = 0.0;
};

// Sums 1-k_m over a list of normalized PD kernels with caps R_m and verifies
// the growth bounds against the distance matrix. With strict=true a variation
// violation throws instead of being reported.
AggregateReport aggregate_pd_to_cnd(const std::vector<Kernel>& kernels,
                                    const std::vector<double>& caps,
                                    const DistanceMatrix& dist, bool strict = false);

}  // namespace wallperc
