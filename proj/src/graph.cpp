#include "wallperc/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wallperc/error.hpp"

namespace wallperc {

namespace {
constexpr int kMaxVertices = 1 << 20;
}

int Graph::edge_index(int u, int v) const {
  if (u > v) std::swap(u, v);
  Edge key{u, v};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return -1;
  return static_cast<int>(it - edges.begin());
}

Graph build_graph(int n, std::vector<Edge> edges) {
  if (n < 1) fail(Err::EmptySpec, "graph needs at least one vertex");
  if (n > kMaxVertices) fail(Err::SizeOverflow, "vertex count " + std::to_string(n) + " exceeds 2^20");
  for (auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      fail(Err::VertexOutOfRange, "edge endpoint outside 0.." + std::to_string(n - 1));
    if (u == v) fail(Err::SelfLoop, "self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  auto dup = std::adjacent_find(edges.begin(), edges.end());
  if (dup != edges.end())
    fail(Err::DuplicateEdge,
         "duplicate edge (" + std::to_string(dup->first) + "," + std::to_string(dup->second) + ")");

  Graph g;
  g.n = n;
  g.edges = std::move(edges);
  g.adj.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());

  std::vector<char> seen(n, 0);
  std::deque<int> q{0};
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : g.adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push_back(v);
      }
  }
  if (reached != n) fail(Err::DisconnectedGraph, "graph is not connected");
  return g;
}

Graph gen_path(int n) {
  if (n < 1) fail(Err::EmptySpec, "path needs n >= 1");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return build_graph(n, std::move(e));
}

Graph gen_cycle(int n) {
  if (n < 3) fail(Err::EmptySpec, "cycle needs n >= 3");
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  e.push_back({0, n - 1});
  return build_graph(n, std::move(e));
}

Graph gen_grid(int dim, int side) {
  if (dim < 1 || side < 1) fail(Err::EmptySpec, "grid needs dim >= 1 and side >= 1");
  double count = 1;
  for (int i = 0; i < dim; ++i) {
    count *= side;
    if (count > kMaxVertices) fail(Err::SizeOverflow, "grid vertex count exceeds 2^20");
  }
  int n = static_cast<int>(count);
  // mixed-radix numbering, coordinate 0 fastest
  std::vector<Edge> e;
  std::vector<int> stride(dim, 1);
  for (int k = 1; k < dim; ++k) stride[k] = stride[k - 1] * side;
  for (int v = 0; v < n; ++v) {
    for (int k = 0; k < dim; ++k) {
      int coord = (v / stride[k]) % side;
      if (coord + 1 < side) e.push_back({v, v + stride[k]});
    }
  }
  return build_graph(n, std::move(e));
}

Graph gen_tree(int arity, int depth) {
  if (arity < 1 || depth < 0) fail(Err::EmptySpec, "tree needs arity >= 1 and depth >= 0");
  std::vector<Edge> e;
  std::vector<int> frontier{0};
  int next = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<int> children;
    for (std::size_t fi = 0; fi < frontier.size(); ++fi) {
      int parent = frontier[fi];
      int fanout = (level == 0) ? arity : arity - 1;
      for (int c = 0; c < fanout; ++c) {
        if (next > kMaxVertices) fail(Err::SizeOverflow, "tree vertex count exceeds 2^20");
        e.push_back({parent, next});
        children.push_back(next);
        ++next;
      }
    }
    frontier = std::move(children);
    if (frontier.empty()) break;
  }
  return build_graph(next, std::move(e));
}

Graph gen_complete_bipartite(int a, int b) {
  if (a < 1 || b < 1) fail(Err::EmptySpec, "complete_bipartite needs both sides >= 1");
  if (static_cast<long long>(a) + b > kMaxVertices) fail(Err::SizeOverflow, "vertex count exceeds 2^20");
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.push_back({i, a + j});
  return build_graph(a + b, std::move(e));
}

Graph gen_hypercube(int dim) {
  if (dim < 0) fail(Err::EmptySpec, "hypercube needs dim >= 0");
  if (dim > 20) fail(Err::SizeOverflow, "hypercube dimension " + std::to_string(dim) + " exceeds 2^20 vertices");
  int n = 1 << dim;
  std::vector<Edge> e;
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < dim; ++k)
      if (!(v & (1 << k))) e.push_back({v, v | (1 << k)});
  return build_graph(n, std::move(e));
}

namespace {

std::vector<long long> parse_args(const std::string& s) {
  std::vector<long long> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == 'x' || ch == 'X') {
      if (cur.empty()) fail(Err::EmptySpec, "malformed family arguments '" + s + "'");
      if (cur.size() > 9) fail(Err::SizeOverflow, "family parameter '" + cur + "' out of range");
      out.push_back(std::stoll(cur));
      cur.clear();
    } else if (ch >= '0' && ch <= '9') {
      cur.push_back(ch);
    } else if (ch == ' ') {
      continue;
    } else {
      fail(Err::EmptySpec, "malformed family arguments '" + s + "'");
    }
  }
  if (!cur.empty()) {
    if (cur.size() > 9) fail(Err::SizeOverflow, "family parameter '" + cur + "' out of range");
    out.push_back(std::stoll(cur));
  }
  return out;
}

int checked_int(long long v) {
  if (v < 0 || v > kMaxVertices) fail(Err::SizeOverflow, "family parameter " + std::to_string(v) + " out of range");
  return static_cast<int>(v);
}

}  // namespace

Graph gen_graph(const std::string& spec) {
  if (spec.empty()) fail(Err::EmptySpec, "empty family descriptor");
  std::string name, args;
  std::size_t i = 0;
  while (i < spec.size() && (std::isalpha(static_cast<unsigned char>(spec[i])) || spec[i] == '_')) ++i;
  name = spec.substr(0, i);
  args = spec.substr(i);
  // strip one of ":", "(", "( )" wrappers
  if (!args.empty() && (args.front() == ':' || args.front() == '(')) args.erase(args.begin());
  if (!args.empty() && args.back() == ')') args.pop_back();
  auto a = parse_args(args);

  auto want = [&](std::size_t k) {
    if (a.size() != k)
      fail(Err::EmptySpec, "family '" + name + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (name == "path") {
    want(1);
    return gen_path(checked_int(a[0]));
  }
  if (name == "cycle") {
    want(1);
    return gen_cycle(checked_int(a[0]));
  }
  if (name == "grid") {
    want(2);
    return gen_grid(checked_int(a[0]), checked_int(a[1]));
  }
  if (name == "tree") {
    want(2);
    return gen_tree(checked_int(a[0]), checked_int(a[1]));
  }
  if (name == "complete_bipartite" || name == "kbipartite") {
    want(2);
    return gen_complete_bipartite(checked_int(a[0]), checked_int(a[1]));
  }
  if (name == "hypercube") {
    want(1);
    return gen_hypercube(checked_int(a[0]));
  }
  fail(Err::EmptySpec, "unknown graph family '" + name + "'");
}

int DistanceMatrix::max() const {
  int m = 0;
  for (int x : d) m = std::max(m, x);
  return m;
}

DistanceMatrix distance_matrix(const Graph& g) {
  DistanceMatrix dm;
  dm.n = g.n;
  dm.d.assign(static_cast<std::size_t>(g.n) * g.n, -1);
  std::vector<int> q(g.n);
  for (int s = 0; s < g.n; ++s) {
    int* row = dm.d.data() + static_cast<std::size_t>(s) * g.n;
    row[s] = 0;
    int head = 0, tail = 0;
    q[tail++] = s;
    while (head < tail) {
      int u = q[head++];
      for (int v : g.adj[u])
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          q[tail++] = v;
        }
    }
  }
  return dm;
}

Graph read_edge_list(std::istream& in) {
  auto next_line = [&](std::string& line) -> bool {
    while (std::getline(in, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      std::size_t p = line.find_first_not_of(" \t\r\n");
      if (p == std::string::npos) continue;
      return true;
    }
    return false;
  };
  std::string line;
  if (!next_line(line)) fail(Err::ParseError, "edge list: missing header line");
  std::istringstream hs(line);
  long long n = 0, m = 0;
  if (!(hs >> n >> m)) fail(Err::ParseError, "edge list: header must be 'n m'");
  std::string extra;
  if (hs >> extra) fail(Err::ParseError, "edge list: trailing tokens in header");
  if (n < 1 || n > kMaxVertices) fail(Err::SizeOverflow, "edge list: vertex count out of range");
  if (m < 0) fail(Err::ParseError, "edge list: negative edge count");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!next_line(line)) fail(Err::ParseError, "edge list: expected " + std::to_string(m) + " edges");
    std::istringstream es(line);
    long long u = 0, v = 0;
    if (!(es >> u >> v)) fail(Err::ParseError, "edge list: malformed edge line '" + line + "'");
    if (es >> extra) fail(Err::ParseError, "edge list: trailing tokens on edge line");
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
  }
  if (next_line(line)) fail(Err::ParseError, "edge list: unexpected trailing line '" + line + "'");
  return build_graph(static_cast<int>(n), std::move(edges));
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Err::IoError, "cannot open '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  for (auto [u, v] : g.edges) out << u << ' ' << v << '\n';
}

}  // namespace wallperc
