#ifndef GDFL_LINK_PREDICT_HPP
#define GDFL_LINK_PREDICT_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gdfl/gnn.hpp"
#include "gdfl/graph.hpp"

namespace gdfl {

/// Graph-autoencoder over the observed subgraph.
///
/// Observed nodes are encoded by one GCN layer, Z = A' H W, with A' the
/// renormalised observed adjacency. Nodes outside the sample have free
/// embedding rows that only feel weight decay. Pairs are scored by
/// sigmoid(z_i . z_j).
struct PredictorParams {
  Eigen::MatrixXd embedding;   // n_observed x d0
  Eigen::MatrixXd weight;      // d0 x d
  Eigen::MatrixXd unobserved;  // (full_n - n_observed) x d, ascending original index
  std::size_t full_n = 0;
};

// Edge probabilities over all nodes: symmetric, zero diagonal, in [0, 1].
struct SoftAdjacency {
  Eigen::MatrixXd probs;

  std::size_t num_nodes() const { return static_cast<std::size_t>(probs.rows()); }
};

inline constexpr double kUnobservedWeightDecay = 1e-4;

// Predictor defaults: 300 epochs, lr 1e-2, patience 50, d0 = 32, d = 16.
TrainConfig default_predictor_config();

// Throws DataError if the observed graph has no edges.
PredictorParams train_predictor(const ObservedSample& sample, std::size_t full_n,
                                const TrainConfig& cfg);

// full_n x d embeddings indexed by original node id.
Eigen::MatrixXd node_embeddings(const PredictorParams& params, const ObservedSample& sample);

// Pairs between kept nodes are overridden by the observed 0/1 indicator.
SoftAdjacency predict_adjacency(const PredictorParams& params, const ObservedSample& known);

// Unit-weight edge (i, j) iff probs(i, j) >= tau; 0 < tau < 1.
Graph threshold_adjacency(const SoftAdjacency& soft, double tau);

// Weighted graph with one edge per pair whose probability is >= min_prob.
Graph soft_to_weighted_graph(const SoftAdjacency& soft, double min_prob = 1e-3);

// "i,j,prob" rows (header included) for i < j with prob >= 1e-3.
std::string soft_adjacency_csv(const SoftAdjacency& soft);

struct LabeledPair {
  NodeId i;
  NodeId j;
  double label;  // 1 edge, 0 non-edge
};

// Mean binary cross-entropy of sigmoid(z_i . z_j) against the labels.
double pair_bce(const Eigen::MatrixXd& z, std::span<const LabeledPair> pairs);

// Mean BCE of the observed edges (all positives) under the trained encoder.
double reconstruction_bce(const PredictorParams& params, const ObservedSample& sample);

/// Hold-out split of a graph's edges for evaluating link prediction.
/// `train` keeps the remaining edges; `held_out` lists the removed edges and
/// an equal number of uniformly sampled non-edges of g.
struct EdgeSplit {
  Graph train;
  std::vector<LabeledPair> held_out;
};

EdgeSplit split_edges(const Graph& g, double holdout_fraction, std::uint64_t seed);

}  // namespace gdfl

#endif  // GDFL_LINK_PREDICT_HPP
