#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "wallperc/compression.hpp"
#include "wallperc/kernel.hpp"
#include "wallperc/percolation.hpp"
#include "wallperc/walls.hpp"

namespace wallperc {

// Shortest decimal that round-trips the double (17 significant digits cap).
std::string format_double(double x);

// Kernel CSV: a header line holding n, then n rows of n comma-separated
// values at 17 significant digits.
void write_kernel_csv(std::ostream& out, const Kernel& k);
Kernel read_kernel_csv(std::istream& in);
void write_kernel_csv_file(const std::string& path, const Kernel& k);
Kernel read_kernel_csv_file(const std::string& path);

// Point cloud CSV: header "n dim metric", then n coordinate rows; metric is
// "euclidean" or "l1".
void write_point_cloud_csv(std::ostream& out, const PointCloud& pc);
PointCloud read_point_cloud_csv(std::istream& in);
PointCloud read_point_cloud_csv_file(const std::string& path);
void write_point_cloud_csv_file(const std::string& path, const PointCloud& pc);

struct CutFamilyMeta {
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double crofton = 0.0;
};

// {"n": int, "cuts": [{"members": [ints], "weight": float}]}; sampler
// provenance rides along under "meta" when present.
std::string cut_family_json(const CutFamily& w, const std::optional<CutFamilyMeta>& meta = {});
CutFamily parse_cut_family_json(const std::string& text);
CutFamily read_cut_family_file(const std::string& path);
void write_cut_family_file(const std::string& path, const CutFamily& w,
                           const std::optional<CutFamilyMeta>& meta = {});

// Top-level array of {"edges": [edge indices], "p": float}.
std::string distribution_json(const PercolationDistribution& d);
PercolationDistribution parse_distribution_json(const std::string& text, const Graph& g);
PercolationDistribution read_distribution_file(const std::string& path, const Graph& g);
void write_distribution_file(const std::string& path, const PercolationDistribution& d);

// {"t","n","hits","trials","tau","ci","seed"}.
std::string two_point_estimate_json(const TwoPointEstimate& e);

// {"alpha","beta","gamma","C","residual","t"} plus degeneracy diagnostics.
std::string fit_result_json(const FitResult& f);

// Write-to-temp + rename so readers never observe partial output.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace wallperc
