#include "wallperc/walls.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>

#include "wallperc/error.hpp"
#include "wallperc/rng.hpp"

namespace wallperc {

CutFamily::CutFamily(int n, std::vector<Cut> raw) : n_(n) {
  if (n < 1) fail(Err::EmptySpec, "cut family needs at least one vertex");
  words_ = (n + 63) / 64;
  std::map<std::vector<int>, double> merged;
  for (auto& c : raw) {
    if (!(c.weight > 0.0)) continue;
    std::sort(c.members.begin(), c.members.end());
    c.members.erase(std::unique(c.members.begin(), c.members.end()), c.members.end());
    if (!c.members.empty() && (c.members.front() < 0 || c.members.back() >= n))
      fail(Err::VertexOutOfRange, "cut member outside 0.." + std::to_string(n - 1));
    if (!c.members.empty() && c.members.front() == 0) {
      // canonical side excludes vertex 0
      std::vector<int> flipped;
      flipped.reserve(n - c.members.size());
      std::size_t p = 0;
      for (int v = 0; v < n; ++v) {
        if (p < c.members.size() && c.members[p] == v)
          ++p;
        else
          flipped.push_back(v);
      }
      c.members = std::move(flipped);
    }
    if (c.members.empty() || static_cast<int>(c.members.size()) == n) continue;  // trivial
    merged[c.members] += c.weight;
  }
  cuts_.reserve(merged.size());
  for (auto& [members, weight] : merged) cuts_.push_back({members, weight});
  masks_.assign(cuts_.size() * static_cast<std::size_t>(words_), 0);
  for (std::size_t c = 0; c < cuts_.size(); ++c)
    for (int v : cuts_[c].members)
      masks_[c * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
}

double CutFamily::total_weight() const {
  double s = 0.0;
  for (const auto& c : cuts_) s += c.weight;
  return s;
}

Kernel wall_kernel(const CutFamily& w) {
  Kernel k(w.n(), 0.0);
  for (int c = 0; c < w.size(); ++c) {
    double wt = w.weight(c);
    for (int u = 0; u < w.n(); ++u) {
      bool su = w.contains(c, u);
      for (int v = u + 1; v < w.n(); ++v)
        if (su != w.contains(c, v)) {
          k.at(u, v) += wt;
          k.at(v, u) += wt;
        }
    }
  }
  return k;
}

WallCrossing wall_crossing(const CutFamily& w, const Graph& g, int u, int v) {
  if (w.n() != g.n) fail(Err::SizeMismatch, "cut family and graph sizes differ");
  if (g.edge_index(u, v) < 0)
    fail(Err::NotAnEdge, "(" + std::to_string(u) + "," + std::to_string(v) + ") is not an edge");
  WallCrossing out;
  for (int c = 0; c < w.size(); ++c)
    if (w.separates(c, u, v)) {
      out.weight += w.weight(c);
      out.cut_indices.push_back(c);
    }
  return out;
}

CutFamily walls_from_l1_embedding(const PointCloud& points, const Graph& g) {
  if (points.n != g.n) fail(Err::SizeMismatch, "point cloud and graph sizes differ");
  if (points.metric != Metric::L1) fail(Err::SizeMismatch, "point cloud metric must be L1");
  std::vector<Cut> cuts;
  for (int c = 0; c < points.dim; ++c) {
    std::vector<double> values;
    values.reserve(points.n);
    for (int v = 0; v < points.n; ++v) values.push_back(points.coord(v, c));
    std::vector<double> levels = values;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
      Cut cut;
      cut.weight = levels[i + 1] - levels[i];
      for (int v = 0; v < points.n; ++v)
        if (values[v] > levels[i]) cut.members.push_back(v);
      cuts.push_back(std::move(cut));
    }
  }
  return CutFamily(g.n, std::move(cuts));
}

CutFamily radial_walls(const Graph& g, int root) {
  if (root < 0 || root >= g.n) fail(Err::VertexOutOfRange, "root vertex out of range");
  std::vector<int> radius(g.n, -1);
  std::vector<int> q(g.n);
  int head = 0, tail = 0;
  radius[root] = 0;
  q[tail++] = root;
  while (head < tail) {
    int u = q[head++];
    for (int v : g.adj[u])
      if (radius[v] < 0) {
        radius[v] = radius[u] + 1;
        q[tail++] = v;
      }
  }
  int ecc = *std::max_element(radius.begin(), radius.end());
  std::vector<Cut> cuts;
  for (int r = 1; r <= ecc; ++r) {
    Cut cut;
    cut.weight = 1.0;
    for (int v = 0; v < g.n; ++v)
      if (radius[v] >= r) cut.members.push_back(v);
    cuts.push_back(std::move(cut));
  }
  return CutFamily(g.n, std::move(cuts));
}

namespace {

// 64-point Gauss-Legendre nodes/weights on [-1,1], computed on first use by
// Newton iteration on the Legendre recurrence.
struct GaussLegendre64 {
  double node[64];
  double weight[64];
  GaussLegendre64() {
    const int n = 64;
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (x * p0 - p1) / (x * x - 1.0);
        double dx = p0 / pp;
        x -= dx;
        if (std::fabs(dx) < 1e-15) break;
      }
      node[i] = -x;
      node[n - 1 - i] = x;
      weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
      weight[n - 1 - i] = weight[i];
    }
  }
};

double integrate_0_halfpi(const std::function<double(double)>& f) {
  static const GaussLegendre64 gl;
  const double a = 0.0, b = 1.5707963267948966192313216916398;
  double h = 0.5 * (b - a), mid = 0.5 * (a + b);
  double s = 0.0;
  for (int i = 0; i < 64; ++i) s += gl.weight[i] * f(mid + h * gl.node[i]);
  return s * h;
}

}  // namespace

double crofton_constant(int m) {
  if (m < 1) fail(Err::SizeMismatch, "dimension must be >= 1");
  if (m == 1) return 1.0;
  static std::mutex mu;
  static std::unordered_map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  // E|theta_1| = int sin(phi) cos^{m-2}(phi) dphi / int cos^{m-2}(phi) dphi on [0, pi/2]
  double num = integrate_0_halfpi([m](double phi) { return std::sin(phi) * std::pow(std::cos(phi), m - 2); });
  double den = integrate_0_halfpi([m](double phi) { return std::pow(std::cos(phi), m - 2); });
  double c = num / den;
  cache[m] = c;
  return c;
}

HalfspaceWalls walls_from_hilbert_embedding(const PointCloud& points, const Graph& g,
                                            std::uint64_t samples, std::uint64_t seed) {
  if (points.n != g.n) fail(Err::SizeMismatch, "point cloud and graph sizes differ");
  if (points.metric != Metric::Euclidean) fail(Err::SizeMismatch, "point cloud metric must be Euclidean");
  if (samples == 0) fail(Err::ZeroSamples, "sample count must be positive");
  if (points.n < 2) fail(Err::DegenerateCloud, "need at least two points");
  bool spread = false;
  for (int v = 1; v < points.n && !spread; ++v)
    for (int c = 0; c < points.dim; ++c)
      if (points.coord(v, c) != points.coord(0, c)) {
        spread = true;
        break;
      }
  if (!spread) fail(Err::DegenerateCloud, "all points coincide");

  int m = points.dim;
  double cm = crofton_constant(m);
  std::vector<Cut> cuts;
  cuts.reserve(samples);
  std::vector<double> theta(m), proj(points.n);
  for (std::uint64_t s = 0; s < samples; ++s) {
    CounterRng rng(seed, s);
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (int c = 0; c < m; ++c) {
        theta[c] = rng.gaussian();
        norm2 += theta[c] * theta[c];
      }
    } while (norm2 < 1e-24);
    double inv = 1.0 / std::sqrt(norm2);
    double lo = 0.0, hi = 0.0;
    for (int v = 0; v < points.n; ++v) {
      double p = 0.0;
      for (int c = 0; c < m; ++c) p += theta[c] * points.coord(v, c);
      proj[v] = p * inv;
      if (v == 0) {
        lo = hi = proj[v];
      } else {
        lo = std::min(lo, proj[v]);
        hi = std::max(hi, proj[v]);
      }
    }
    double range = hi - lo;
    if (range <= 0.0) continue;  // direction orthogonal to the spread; contributes nothing
    double offset = lo + range * rng.uniform01();
    Cut cut;
    cut.weight = range / (cm * static_cast<double>(samples));
    for (int v = 0; v < points.n; ++v)
      if (proj[v] > offset) cut.members.push_back(v);
    if (cut.members.empty() || static_cast<int>(cut.members.size()) == points.n) continue;
    cuts.push_back(std::move(cut));
  }
  HalfspaceWalls out;
  out.walls = CutFamily(g.n, std::move(cuts));
  out.seed = seed;
  out.samples = samples;
  out.crofton = cm;
  return out;
}

}  // namespace wallperc
