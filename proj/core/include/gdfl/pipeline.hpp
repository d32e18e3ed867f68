#ifndef GDFL_PIPELINE_HPP
#define GDFL_PIPELINE_HPP

#include <cstdint>
#include <string>

#include "gdfl/gnn.hpp"
#include "gdfl/graph.hpp"
#include "gdfl/link_predict.hpp"
#include "gdfl/qubo.hpp"

namespace gdfl {

struct PipelineConfig {
  ProblemKind kind = ProblemKind::MaxCut;
  double observe_fraction = 0.8;
  double lambda = 1.0;
  TrainConfig predictor_cfg = default_predictor_config();
  TrainConfig solver_cfg;
  std::uint64_t seed = 0;  // node sampling
  double penalty = kDefaultPenalty;
  bool polish = true;

  void validate() const;
};

struct PipelineResult {
  ProblemKind kind = ProblemKind::MaxCut;
  std::size_t n = 0;
  std::size_t m = 0;
  double observe_fraction = 0.0;
  double lambda = 0.0;
  std::uint64_t seed = 0;

  BinaryAssignment assignment;  // over the full graph
  double objective_true = 0.0;
  double objective_predicted = 0.0;
  bool feasible_true = false;
  double runtime_ms = 0.0;

  double h_qubo = 0.0;
  double l_obj = 0.0;
  double combined_loss = 0.0;
};

// H(p; q_pred) + lambda * recon_bce. Throws InvalidArgument if lambda < 0.
double combined_loss(const SoftAssignment& p, const QuboMatrix& q_pred, double recon_bce,
                     double lambda);

/**
 * Predict-then-optimise on a partially observed graph.
 *
 *  1. sample the observed subgraph;
 *  2. train the link predictor on it and predict the soft adjacency;
 *  3. build the QUBO on the soft adjacency (probabilities as edge weights);
 *  4. train the GCN solver on H + lambda * L_obj, with L_obj the predictor's
 *     reconstruction BCE on observed edges (predictor frozen);
 *  5. round, repair and polish against the true graph and score there.
 */
PipelineResult end_to_end_solve(const Graph& g_true, const PipelineConfig& cfg);

// {problem, n, m, observe_fraction, lambda, seed, objective_true,
//  objective_predicted, feasible_true, runtime_ms, h_qubo, l_obj, combined_loss}
std::string to_json(const PipelineResult& r, int indent = 2);

}  // namespace gdfl

#endif  // GDFL_PIPELINE_HPP
