#include "resetkit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>

#include "resetkit/random.hpp"

namespace resetkit {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::size_t eccentricity(const Graph& g, ProcessId source) {
  const auto dist = bfs_distances(g, source);
  std::size_t ecc = 0;
  for (auto d : dist) {
    if (d == kUnreached) throw GraphError("graph is disconnected");
    ecc = std::max(ecc, d);
  }
  return ecc;
}

}  // namespace

bool Graph::adjacent(ProcessId u, ProcessId v) const {
  const auto& adj = adjacency_[u];
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<std::pair<ProcessId, ProcessId>> Graph::edges() const {
  std::vector<std::pair<ProcessId, ProcessId>> out;
  out.reserve(edge_count_);
  for (ProcessId u = 0; u < size(); ++u) {
    for (auto v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::uint64_t Graph::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(size());
  for (const auto& [u, v] : edges()) {
    mix(u);
    mix(v);
  }
  return h;
}

Graph build_graph(std::span<const std::pair<ProcessId, ProcessId>> edges, std::size_t n) {
  if (n == 0) throw GraphError("graph must have at least one process");
  Graph g;
  g.adjacency_.assign(n, {});
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw GraphError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") has an index outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) throw GraphError("self-loop at " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::size_t degree_sum = 0;
  for (ProcessId u = 0; u < n; ++u) {
    auto& adj = g.adjacency_[u];
    std::sort(adj.begin(), adj.end());
    if (std::adjacent_find(adj.begin(), adj.end()) != adj.end()) {
      throw GraphError("duplicate edge at process " + std::to_string(u));
    }
    degree_sum += adj.size();
    g.max_degree_ = std::max(g.max_degree_, adj.size());
  }
  g.edge_count_ = degree_sum / 2;
  // connectivity
  const auto dist = bfs_distances(g, 0);
  if (std::find(dist.begin(), dist.end(), kUnreached) != dist.end()) {
    throw GraphError("graph is disconnected");
  }
  g.diameter_ = diameter(g);
  return g;
}

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "path") return GraphKind::path;
  if (name == "ring") return GraphKind::ring;
  if (name == "star") return GraphKind::star;
  if (name == "complete") return GraphKind::complete;
  if (name == "random_connected" || name == "random") return GraphKind::random_connected;
  throw GraphError("unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::path: return "path";
    case GraphKind::ring: return "ring";
    case GraphKind::star: return "star";
    case GraphKind::complete: return "complete";
    case GraphKind::random_connected: return "random_connected";
  }
  return "?";
}

Graph generate(GraphKind kind, std::size_t n, std::uint64_t seed, double extra_edge_probability) {
  if (n < 2) throw GraphError("generators require n >= 2");
  std::vector<std::pair<ProcessId, ProcessId>> edges;
  const auto N = static_cast<ProcessId>(n);
  switch (kind) {
    case GraphKind::path:
      for (ProcessId u = 0; u + 1 < N; ++u) edges.emplace_back(u, u + 1);
      break;
    case GraphKind::ring:
      if (n < 3) throw GraphError("ring requires n >= 3");
      for (ProcessId u = 0; u < N; ++u) edges.emplace_back(u, (u + 1) % N);
      break;
    case GraphKind::star:
      for (ProcessId u = 1; u < N; ++u) edges.emplace_back(0, u);
      break;
    case GraphKind::complete:
      for (ProcessId u = 0; u < N; ++u) {
        for (ProcessId v = u + 1; v < N; ++v) edges.emplace_back(u, v);
      }
      break;
    case GraphKind::random_connected: {
      if (extra_edge_probability < 0.0 || extra_edge_probability > 1.0) {
        throw GraphError("extra edge probability must lie in [0, 1]");
      }
      Rng rng(seed);
      // randomized Prim over the complete graph: attach a uniformly chosen
      // outside vertex to a uniformly chosen tree vertex
      std::vector<ProcessId> outside(n);
      for (ProcessId u = 0; u < N; ++u) outside[u] = u;
      std::vector<ProcessId> tree;
      const auto first = uniform_index(rng, outside.size());
      tree.push_back(outside[first]);
      outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(first));
      std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
      while (!outside.empty()) {
        const auto oi = uniform_index(rng, outside.size());
        const auto w = outside[oi];
        const auto t = tree[uniform_index(rng, tree.size())];
        edges.emplace_back(std::min(t, w), std::max(t, w));
        present[t][w] = present[w][t] = true;
        tree.push_back(w);
        outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(oi));
      }
      for (ProcessId u = 0; u < N; ++u) {
        for (ProcessId v = u + 1; v < N; ++v) {
          if (present[u][v]) continue;
          if (uniform_real(rng) < extra_edge_probability) edges.emplace_back(u, v);
        }
      }
      break;
    }
  }
  return build_graph(edges, n);
}

std::vector<std::size_t> bfs_distances(const Graph& g, ProcessId source) {
  std::vector<std::size_t> dist(g.size(), kUnreached);
  std::queue<ProcessId> queue;
  dist[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const auto u = queue.front();
    queue.pop();
    for (auto v : g.neighbors(u)) {
      if (dist[v] == kUnreached) {
        dist[v] = dist[u] + 1;
        queue.push(v);
      }
    }
  }
  return dist;
}

std::size_t diameter(const Graph& g) {
  std::size_t best = 0;
  for (ProcessId u = 0; u < g.size(); ++u) best = std::max(best, eccentricity(g, u));
  return best;
}

std::size_t diameter_parallel(const Graph& g) {
  const auto n = static_cast<std::int64_t>(g.size());
  std::size_t best = 0;
  bool disconnected = false;
#pragma omp parallel for reduction(max : best) reduction(|| : disconnected) schedule(dynamic)
  for (std::int64_t u = 0; u < n; ++u) {
    const auto dist = bfs_distances(g, static_cast<ProcessId>(u));
    for (auto d : dist) {
      if (d == kUnreached) {
        disconnected = true;
      } else {
        best = std::max(best, d);
      }
    }
  }
  if (disconnected) throw GraphError("graph is disconnected");
  return best;
}

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t n = 0;
  bool have_header = false;
  std::vector<std::pair<ProcessId, ProcessId>> edges;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (!have_header) {
      std::string tag;
      long long count = -1;
      if (!(fields >> tag >> count) || tag != "n" || count < 0) {
        throw GraphError("line " + std::to_string(line_no) + ": expected header 'n <count>'");
      }
      n = static_cast<std::size_t>(count);
      have_header = true;
      continue;
    }
    long long u = -1;
    long long v = -1;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw GraphError("line " + std::to_string(line_no) + ": expected 'u v'");
    }
    std::string rest;
    if (fields >> rest) throw GraphError("line " + std::to_string(line_no) + ": trailing data");
    edges.emplace_back(static_cast<ProcessId>(u), static_cast<ProcessId>(v));
  }
  if (!have_header) throw GraphError("missing header 'n <count>'");
  return build_graph(edges, n);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.size() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

}  // namespace resetkit
