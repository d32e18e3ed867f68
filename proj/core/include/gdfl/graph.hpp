#ifndef GDFL_GRAPH_HPP
#define GDFL_GRAPH_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/SparseCore>

namespace gdfl {

using NodeId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Immutable weighted undirected graph.
 *
 * Edges are kept in canonical order (u < v, sorted lexicographically) and
 * mirrored into a compressed sparse row adjacency so that neighbour scans are
 * contiguous. Self-loops and duplicate undirected edges are rejected at
 * construction.
 */
class Graph {
 public:
  Graph() = default;

  // Throws DataError on out-of-range endpoints, self-loops or duplicates.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {adj_.data() + offsets_[v], adj_.data() + offsets_[v + 1]};
  }
  std::span<const double> neighbor_weights(NodeId v) const noexcept {
    return {adj_w_.data() + offsets_[v], adj_w_.data() + offsets_[v + 1]};
  }
  std::size_t neighbor_count(NodeId v) const noexcept {
    return offsets_[v + 1] - offsets_[v];
  }

  // Weighted degree: sum of incident edge weights.
  double degree(NodeId v) const noexcept { return degree_[v]; }
  std::span<const double> degrees() const noexcept { return degree_; }

  bool has_edge(NodeId u, NodeId v) const noexcept;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
  std::vector<double> adj_w_;
  std::vector<double> degree_;
};

// Node-induced subgraph of a larger graph.
struct ObservedSample {
  std::vector<NodeId> kept_nodes;  // strictly increasing original indices
  Graph observed_graph;            // indexed 0..kept_nodes.size()-1
  std::size_t original_n = 0;

  // observed index -> original index
  NodeId original_index(NodeId observed) const { return kept_nodes[observed]; }
};

// Gset text format: "n m" header then m lines "i j w" with 1-based indices.
Graph parse_gset(std::string_view text);
std::string write_gset(const Graph& g);

// Reads a Gset file; a ".gz" suffix selects gzip decompression.
Graph read_gset_file(const std::filesystem::path& path);

// Random simple d-regular graph via the pairing model with full restarts.
Graph generate_d_regular(std::size_t n, std::size_t d, std::uint64_t seed);

// Erdős–Rényi G(n, p) with unit weights.
Graph generate_erdos_renyi(std::size_t n, double p, std::uint64_t seed);

ObservedSample sample_observed_subgraph(const Graph& g, double fraction,
                                        std::uint64_t seed);

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

/// D^{-1/2} (A + I) D^{-1/2}, D the row sums of |A| + I.
///
/// Degrees are taken over absolute weights so that signed Gset instances
/// still normalise; for non-negative weights this is the usual GCN
/// propagation matrix. The result is symmetric with spectral radius <= 1.
Eigen::SparseMatrix<double> renormalized_adjacency(const Graph& g);

}  // namespace gdfl

#endif  // GDFL_GRAPH_HPP
