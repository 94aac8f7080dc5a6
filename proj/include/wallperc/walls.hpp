#pragma once

#include <cstdint>
#include <vector>

#include "wallperc/graph.hpp"
#include "wallperc/kernel.hpp"

namespace wallperc {

// One weighted vertex cut. Members are sorted, never contain vertex 0
// (canonical side), and are neither empty nor the full vertex set.
struct Cut {
  std::vector<int> members;
  double weight = 0.0;
};

// Finite family of weighted cuts playing the role of a wall structure: the
// wall between u and v is the set of cuts separating them, and its measure is
// their total weight.
class CutFamily {
 public:
  CutFamily() = default;
  // Canonicalizes: flips cuts containing 0, drops trivial cuts and
  // nonpositive-weight cuts, merges duplicates, sorts by member list.
  CutFamily(int n, std::vector<Cut> cuts);

  int n() const { return n_; }
  int size() const { return static_cast<int>(cuts_.size()); }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const Cut& cut(int c) const { return cuts_[c]; }
  double weight(int c) const { return cuts_[c].weight; }
  double total_weight() const;

  bool contains(int c, int v) const {
    return (masks_[static_cast<std::size_t>(c) * words_ + (v >> 6)] >> (v & 63)) & 1u;
  }
  bool separates(int c, int u, int v) const { return contains(c, u) != contains(c, v); }

 private:
  int n_ = 0;
  int words_ = 0;
  std::vector<Cut> cuts_;
  std::vector<std::uint64_t> masks_;  // size() * words_ membership bitmask
};

// Total separating weight between every pair; a pseudometric, and an L1
// kernel by construction.
Kernel wall_kernel(const CutFamily& w);

struct WallCrossing {
  double weight = 0.0;
  std::vector<int> cut_indices;
};

// The wall of an edge: cuts separating its endpoints and their total weight.
WallCrossing wall_crossing(const CutFamily& w, const Graph& g, int u, int v);

// Coordinate threshold cuts of an L1 point cloud indexed by graph vertices.
// The induced wall kernel reproduces pairwise L1 distances exactly.
CutFamily walls_from_l1_embedding(const PointCloud& points, const Graph& g);

// Cuts {v : d(root,v) >= r}, r = 1..ecc(root), unit weight. The induced
// kernel is | d(root,u) - d(root,v) |.
CutFamily radial_walls(const Graph& g, int root);

struct HalfspaceWalls {
  CutFamily walls;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double crofton = 0.0;  // normalizing constant for the ambient dimension
};

// Monte Carlo half-space cuts of a Euclidean point cloud: direction uniform
// on the sphere, offset uniform on the bounding slab, weight
// slab_range / (c_m * samples). Expected separating weight of a pair is its
// Euclidean distance, so the induced kernel estimates |f(u)-f(v)|.
HalfspaceWalls walls_from_hilbert_embedding(const PointCloud& points, const Graph& g,
                                            std::uint64_t samples, std::uint64_t seed);

// E|theta_1| for theta uniform on the unit sphere of R^m, evaluated by
// 64-point Gauss-Legendre quadrature and cached per dimension.
double crofton_constant(int m);

}  // namespace wallperc
