#include "wallperc/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "wallperc/error.hpp"

namespace wallperc {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  // trim to the shortest representation that still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char probe[40];
    std::snprintf(probe, sizeof probe, "%.*g", prec, x);
    double back = 0.0;
    auto r = std::from_chars(probe, probe + std::strlen(probe), back);
    if (r.ec == std::errc{} && back == x) return probe;
  }
  return std::string(buf, len);
}

void write_kernel_csv(std::ostream& out, const Kernel& k) {
  out << k.n() << '\n';
  for (int i = 0; i < k.n(); ++i) {
    for (int j = 0; j < k.n(); ++j) {
      if (j) out << ',';
      out << format_double(k.at(i, j));
    }
    out << '\n';
  }
}

Kernel read_kernel_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Err::ParseError, "kernel csv: missing header");
  int n = 0;
  try {
    n = std::stoi(line);
  } catch (...) {
    fail(Err::ParseError, "kernel csv: header must hold the size");
  }
  if (n < 1) fail(Err::ParseError, "kernel csv: size must be positive");
  Kernel k(n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail(Err::ParseError, "kernel csv: expected " + std::to_string(n) + " rows");
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ','))
        fail(Err::ParseError, "kernel csv: row " + std::to_string(i) + " is short");
      try {
        k.at(i, j) = std::stod(cell);
      } catch (...) {
        fail(Err::ParseError, "kernel csv: bad number '" + cell + "'");
      }
    }
    if (std::getline(row, cell, ','))
      fail(Err::ParseError, "kernel csv: row " + std::to_string(i) + " is long");
  }
  return k;
}

void write_kernel_csv_file(const std::string& path, const Kernel& k) {
  std::ostringstream out;
  write_kernel_csv(out, k);
  atomic_write_file(path, out.str());
}

Kernel read_kernel_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  return read_kernel_csv(in);
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& pc) {
  out << pc.n << ' ' << pc.dim << ' ' << (pc.metric == Metric::L1 ? "l1" : "euclidean") << '\n';
  for (int i = 0; i < pc.n; ++i) {
    for (int j = 0; j < pc.dim; ++j) {
      if (j) out << ',';
      out << format_double(pc.coord(i, j));
    }
    out << '\n';
  }
}

PointCloud read_point_cloud_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(Err::ParseError, "point cloud csv: missing header");
  std::istringstream hs(line);
  int n = 0, dim = 0;
  std::string metric;
  if (!(hs >> n >> dim >> metric)) fail(Err::ParseError, "point cloud csv: header must be 'n dim metric'");
  if (n < 1 || dim < 1) fail(Err::ParseError, "point cloud csv: bad dimensions");
  PointCloud pc;
  pc.n = n;
  pc.dim = dim;
  if (metric == "l1")
    pc.metric = Metric::L1;
  else if (metric == "euclidean")
    pc.metric = Metric::Euclidean;
  else
    fail(Err::ParseError, "point cloud csv: metric must be 'euclidean' or 'l1'");
  pc.coords.assign(static_cast<std::size_t>(n) * dim, 0.0);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail(Err::ParseError, "point cloud csv: expected " + std::to_string(n) + " rows");
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < dim; ++j) {
      if (!std::getline(row, cell, ',')) fail(Err::ParseError, "point cloud csv: short row");
      try {
        pc.coord(i, j) = std::stod(cell);
      } catch (...) {
        fail(Err::ParseError, "point cloud csv: bad number '" + cell + "'");
      }
    }
  }
  return pc;
}

PointCloud read_point_cloud_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  return read_point_cloud_csv(in);
}

void write_point_cloud_csv_file(const std::string& path, const PointCloud& pc) {
  std::ostringstream out;
  write_point_cloud_csv(out, pc);
  atomic_write_file(path, out.str());
}

std::string cut_family_json(const CutFamily& w, const std::optional<CutFamilyMeta>& meta) {
  json j;
  j["n"] = w.n();
  j["cuts"] = json::array();
  for (const auto& c : w.cuts()) {
    json jc;
    jc["members"] = c.members;
    jc["weight"] = c.weight;
    j["cuts"].push_back(jc);
  }
  if (meta) {
    j["meta"] = {{"seed", meta->seed}, {"samples", meta->samples}, {"crofton", meta->crofton}};
  }
  return j.dump(2) + "\n";
}

CutFamily parse_cut_family_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("cut family json: ") + e.what());
  }
  try {
    int n = j.at("n").get<int>();
    std::vector<Cut> cuts;
    for (const auto& jc : j.at("cuts")) {
      Cut c;
      c.members = jc.at("members").get<std::vector<int>>();
      c.weight = jc.at("weight").get<double>();
      cuts.push_back(std::move(c));
    }
    return CutFamily(n, std::move(cuts));
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("cut family json: ") + e.what());
  }
}

CutFamily read_cut_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_cut_family_json(ss.str());
}

void write_cut_family_file(const std::string& path, const CutFamily& w,
                           const std::optional<CutFamilyMeta>& meta) {
  atomic_write_file(path, cut_family_json(w, meta));
}

std::string distribution_json(const PercolationDistribution& d) {
  json arr = json::array();
  for (int a = 0; a < d.atoms(); ++a) {
    json atom;
    std::vector<int> open;
    for (int e = 0; e < d.graph.edge_count(); ++e)
      if (d.configs[a].test(e)) open.push_back(e);
    atom["edges"] = open;
    atom["p"] = d.probs[a];
    arr.push_back(atom);
  }
  return arr.dump(2) + "\n";
}

PercolationDistribution parse_distribution_json(const std::string& text, const Graph& g) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("distribution json: ") + e.what());
  }
  if (!arr.is_array()) fail(Err::ParseError, "distribution json: top level must be an array");
  PercolationDistribution d;
  d.graph = g;
  double total = 0.0;
  try {
    for (const auto& atom : arr) {
      EdgeConfig cfg(g.edge_count(), false);
      for (int e : atom.at("edges").get<std::vector<int>>()) {
        if (e < 0 || e >= g.edge_count())
          fail(Err::ParseError, "distribution json: edge index out of range");
        cfg.set(e);
      }
      double p = atom.at("p").get<double>();
      if (!(p >= 0.0 && p <= 1.0)) fail(Err::ParseError, "distribution json: probability out of range");
      total += p;
      d.configs.push_back(std::move(cfg));
      d.probs.push_back(p);
    }
  } catch (const json::exception& e) {
    fail(Err::ParseError, std::string("distribution json: ") + e.what());
  }
  if (std::fabs(total - 1.0) > 1e-9)
    fail(Err::ParseError, "distribution json: probabilities sum to " + std::to_string(total));
  return d;
}

PercolationDistribution read_distribution_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_distribution_json(ss.str(), g);
}

void write_distribution_file(const std::string& path, const PercolationDistribution& d) {
  atomic_write_file(path, distribution_json(d));
}

std::string two_point_estimate_json(const TwoPointEstimate& e) {
  json j;
  j["t"] = e.t;
  j["n"] = e.n;
  j["trials"] = e.trials;
  j["seed"] = e.seed;
  auto matrix = [&](auto get) {
    json rows = json::array();
    for (int u = 0; u < e.n; ++u) {
      json row = json::array();
      for (int v = 0; v < e.n; ++v) row.push_back(get(u, v));
      rows.push_back(row);
    }
    return rows;
  };
  j["hits"] = matrix([&](int u, int v) { return e.hit(u, v); });
  j["tau"] = matrix([&](int u, int v) { return e.tau.at(u, v); });
  j["ci"] = matrix([&](int u, int v) { return e.ci.at(u, v); });
  return j.dump(2) + "\n";
}

std::string fit_result_json(const FitResult& f) {
  json j;
  j["alpha"] = f.alpha;
  j["beta"] = f.beta;
  j["gamma"] = f.gamma;
  j["C"] = f.C;
  j["residual"] = f.residual;
  j["t"] = f.t;
  if (f.degenerate) {
    j["degenerate"] = true;
    j["warning"] = f.diagnostic;
  }
  return j.dump(2) + "\n";
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(Err::IoError, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) fail(Err::IoError, "short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(Err::IoError, "rename to '" + path + "' failed: " + ec.message());
}

}  // namespace wallperc
