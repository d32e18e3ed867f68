#include "gdfl/pipeline.hpp"

#include <chrono>

#include <json.hpp>

#include "gdfl/error.hpp"

namespace gdfl {

void PipelineConfig::validate() const {
  if (!(observe_fraction > 0.0 && observe_fraction <= 1.0)) {
    throw InvalidArgument("observe fraction must lie in (0, 1]");
  }
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  predictor_cfg.validate();
  solver_cfg.validate();
}

double combined_loss(const SoftAssignment& p, const QuboMatrix& q_pred, double recon_bce,
                     double lambda) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  return relaxed_loss(p, q_pred) + lambda * recon_bce;
}

PipelineResult end_to_end_solve(const Graph& g_true, const PipelineConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  const ObservedSample sample = sample_observed_subgraph(g_true, cfg.observe_fraction, cfg.seed);
  const PredictorParams predictor =
      train_predictor(sample, g_true.num_nodes(), cfg.predictor_cfg);
  const SoftAdjacency soft = predict_adjacency(predictor, sample);
  const Graph g_pred = soft_to_weighted_graph(soft);
  const QuboMatrix q_pred = build_qubo(cfg.kind, g_pred, cfg.penalty);
  const double l_obj = reconstruction_bce(predictor, sample);

  const TrainResult solved = train(g_pred, q_pred, cfg.solver_cfg, cfg.lambda * l_obj);

  PipelineResult r;
  r.kind = cfg.kind;
  r.n = g_true.num_nodes();
  r.m = g_true.num_edges();
  r.observe_fraction = cfg.observe_fraction;
  r.lambda = cfg.lambda;
  r.seed = cfg.seed;
  r.assignment = project_and_repair(cfg.kind, g_true, solved.best_p, cfg.polish);
  r.objective_true = objective(cfg.kind, g_true, r.assignment);
  r.objective_predicted = objective(cfg.kind, g_pred, r.assignment);
  r.feasible_true = is_feasible(cfg.kind, g_true, r.assignment);
  r.h_qubo = relaxed_loss(solved.best_p, q_pred);
  r.l_obj = l_obj;
  r.combined_loss = combined_loss(solved.best_p, q_pred, l_obj, cfg.lambda);
  r.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string to_json(const PipelineResult& r, int indent) {
  nlohmann::ordered_json j;
  j["problem"] = std::string(to_string(r.kind));
  j["n"] = r.n;
  j["m"] = r.m;
  j["observe_fraction"] = r.observe_fraction;
  j["lambda"] = r.lambda;
  j["seed"] = r.seed;
  j["objective_true"] = r.objective_true;
  j["objective_predicted"] = r.objective_predicted;
  j["feasible_true"] = r.feasible_true;
  j["runtime_ms"] = r.runtime_ms;
  j["h_qubo"] = r.h_qubo;
  j["l_obj"] = r.l_obj;
  j["combined_loss"] = r.combined_loss;
  return j.dump(indent);
}

}  // namespace gdfl
