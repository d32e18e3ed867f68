#ifndef GDFL_GNN_HPP
#define GDFL_GNN_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gdfl/graph.hpp"
#include "gdfl/qubo.hpp"

namespace gdfl {

// Relaxed node decisions, every entry strictly inside (0, 1).
using SoftAssignment = Eigen::VectorXd;

/// Parameters of the two-layer GCN solver. Graphs here are featureless, so
/// the first layer's input is a trainable embedding table.
struct GcnParams {
  Eigen::MatrixXd embedding;  // n x d0
  Eigen::MatrixXd w0;         // d0 x d1
  Eigen::MatrixXd w1;         // d1 x 1

  std::size_t num_nodes() const { return static_cast<std::size_t>(embedding.rows()); }
};

struct TrainConfig {
  std::size_t max_epochs = 10'000;
  double learning_rate = 1e-2;
  std::size_t patience = 500;
  double tolerance = 1e-4;
  std::uint64_t seed = 0;
  std::size_t d0 = 0;  // 0 selects default_dims()
  std::size_t d1 = 0;

  void validate() const;
};

struct GcnDims {
  std::size_t d0;
  std::size_t d1;
};

inline constexpr std::size_t kMinEmbeddingWidth = 32;

// d0 = max(32, round(sqrt(n))) capped at 128; d1 = max(2, d0 / 2).
GcnDims default_dims(std::size_t n);
GcnDims resolve_dims(const TrainConfig& cfg, std::size_t n);

// Uniform on [-s, s] with s = 1/sqrt(fan-in) per block. Embedding rows are
// one-hot lookups (fan-in 1), so they draw from [-1, 1].
GcnParams init_params(std::size_t n, std::size_t d0, std::size_t d1, std::uint64_t seed);

// p = sigmoid(A relu(A H W0) W1)
SoftAssignment forward(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat);

// H_QUBO evaluated on the relaxed vector.
double relaxed_loss(const SoftAssignment& p, const QuboMatrix& q);

struct GcnGradients {
  Eigen::MatrixXd embedding;
  Eigen::MatrixXd w0;
  Eigen::MatrixXd w1;
};

struct LossAndGradients {
  SoftAssignment p;
  double loss = 0.0;
  GcnGradients grad;
};

// One forward/backward pass through the GCN and the relaxed Hamiltonian.
LossAndGradients loss_and_gradients(const GcnParams& params,
                                    const Eigen::SparseMatrix<double>& a_hat,
                                    const QuboMatrix& q);

GcnGradients backward(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat,
                      const QuboMatrix& q);

struct TraceRow {
  std::size_t epoch;
  double loss;
  double best_loss;

  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct TrainResult {
  SoftAssignment best_p;
  double best_loss = 0.0;
  std::vector<TraceRow> trace;
  GcnParams params;  // parameters at the best epoch
};

/// Unsupervised training of the GCN on the relaxed Hamiltonian of q.
///
/// Runs Adam until max_epochs, or until the loss has not improved on its
/// reference value by more than cfg.tolerance for cfg.patience consecutive
/// epochs. loss_shift is a constant added to every recorded loss (the
/// lambda-weighted auxiliary term of the pipeline); it does not move the
/// parameters. Throws TrainingDiverged on a non-finite loss.
TrainResult train(const Graph& g, const QuboMatrix& q, const TrainConfig& cfg,
                  double loss_shift = 0.0);

// "epoch,loss,best_loss" with a header line.
std::string trace_csv(const std::vector<TraceRow>& trace);

/**
 * Rounds p at 0.5 and restores feasibility against g.
 *
 * MIS: every edge with both ends selected drops the endpoint of larger
 * degree (ties drop the larger index); then unblocked nodes are added in
 * ascending order. MVC: every uncovered edge gains the endpoint of larger
 * degree (ties take the smaller index); then nodes are dropped in
 * descending order while the cover stays valid. With polish set, a 1-flip
 * local search follows.
 */
BinaryAssignment project_and_repair(ProblemKind kind, const Graph& g, const SoftAssignment& p,
                                    bool polish);

}  // namespace gdfl

#endif  // GDFL_GNN_HPP
