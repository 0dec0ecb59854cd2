#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace resetkit {

using ProcessId = std::uint32_t;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Simple undirected connected communication network.
///
/// Neighbor lists are sorted ascending; the position of a neighbor in the
/// list is its local label at that process.
class Graph {
 public:
  Graph() = default;

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t max_degree() const { return max_degree_; }
  std::size_t diameter() const { return diameter_; }

  std::size_t degree(ProcessId u) const { return adjacency_[u].size(); }
  std::span<const ProcessId> neighbors(ProcessId u) const { return adjacency_[u]; }
  bool adjacent(ProcessId u, ProcessId v) const;

  std::vector<std::pair<ProcessId, ProcessId>> edges() const;

  /// 64-bit fingerprint of (n, edge set).
  std::uint64_t fingerprint() const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.adjacency_ == b.adjacency_; }

  friend Graph build_graph(std::span<const std::pair<ProcessId, ProcessId>> edges, std::size_t n);

 private:
  std::vector<std::vector<ProcessId>> adjacency_;
  std::size_t edge_count_ = 0;
  std::size_t max_degree_ = 0;
  std::size_t diameter_ = 0;
};

/// Validates and builds a graph. Throws GraphError on n = 0, out-of-range
/// indices, self-loops, duplicate edges or a disconnected result.
Graph build_graph(std::span<const std::pair<ProcessId, ProcessId>> edges, std::size_t n);

enum class GraphKind { path, ring, star, complete, random_connected };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

inline constexpr double kDefaultExtraEdgeProbability = 0.2;

/// Deterministic for a fixed seed. random_connected builds a spanning tree by
/// randomized Prim and then adds each remaining pair independently with
/// probability extra_edge_probability.
Graph generate(GraphKind kind, std::size_t n, std::uint64_t seed,
               double extra_edge_probability = kDefaultExtraEdgeProbability);

/// Hop distances from source (BFS).
std::vector<std::size_t> bfs_distances(const Graph& g, ProcessId source);

/// Exact hop diameter, all-pairs BFS. Serial reference.
std::size_t diameter(const Graph& g);
/// Same value, sources spread over OpenMP threads.
std::size_t diameter_parallel(const Graph& g);

/// Edge-list text format: a header line `n <count>` followed by one `u v`
/// pair per line. Blank lines and lines starting with '#' are ignored.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace resetkit
