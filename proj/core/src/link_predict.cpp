#include "gdfl/link_predict.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdfl/adam.hpp"
#include "gdfl/error.hpp"
#include "gdfl/rng.hpp"

namespace gdfl {

namespace {

constexpr std::uint64_t kNegativeStream = 0x9e3779b97f4a7c15ULL;

double sigmoid(double s) {
  return s >= 0 ? 1.0 / (1.0 + std::exp(-s)) : std::exp(s) / (1.0 + std::exp(s));
}

// -[y log sigmoid(s) + (1 - y) log(1 - sigmoid(s))]
double bce_logit(double s, double y) {
  const double softplus = std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s)));
  return softplus - y * s;
}

void fill_uniform(Eigen::MatrixXd& m, double scale, Rng& rng) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.symmetric(scale);
  }
}

std::size_t max_edges(std::size_t n) { return n * (n - (n > 0 ? 1 : 0)) / 2; }

}  // namespace

TrainConfig default_predictor_config() {
  TrainConfig cfg;
  cfg.max_epochs = 300;
  cfg.learning_rate = 1e-2;
  cfg.patience = 50;
  cfg.tolerance = 1e-4;
  cfg.d0 = 32;
  cfg.d1 = 16;
  return cfg;
}

PredictorParams train_predictor(const ObservedSample& sample, std::size_t full_n,
                                const TrainConfig& cfg) {
  cfg.validate();
  const Graph& obs = sample.observed_graph;
  const std::size_t n_obs = obs.num_nodes();
  if (full_n < n_obs) throw InvalidArgument("full_n smaller than the observed node count");
  if (obs.num_edges() == 0) throw DataError("cannot train link predictor: observed graph has no edges");

  const std::size_t d0 = cfg.d0 != 0 ? cfg.d0 : 32;
  const std::size_t d = cfg.d1 != 0 ? cfg.d1 : 16;
  if (d < 2) throw InvalidArgument("predictor embedding dim must be >= 2");

  Rng init(cfg.seed);
  PredictorParams params;
  params.full_n = full_n;
  params.embedding.resize(static_cast<Eigen::Index>(n_obs), static_cast<Eigen::Index>(d0));
  params.weight.resize(static_cast<Eigen::Index>(d0), static_cast<Eigen::Index>(d));
  params.unobserved.resize(static_cast<Eigen::Index>(full_n - n_obs), static_cast<Eigen::Index>(d));
  fill_uniform(params.embedding, 1.0 / std::sqrt(static_cast<double>(d0)), init);
  fill_uniform(params.weight, 1.0 / std::sqrt(static_cast<double>(d0)), init);
  fill_uniform(params.unobserved, 1.0 / std::sqrt(static_cast<double>(d)), init);

  const auto a_hat = renormalized_adjacency(obs);
  const std::size_t m = obs.num_edges();
  const bool has_non_edges = m < max_edges(n_obs);
  Rng neg(cfg.seed ^ kNegativeStream);

  AdamSettings adam{.learning_rate = cfg.learning_rate};
  AdamSlot slot_h(params.embedding.rows(), params.embedding.cols());
  AdamSlot slot_w(params.weight.rows(), params.weight.cols());
  AdamSlot slot_u(params.unobserved.rows(), params.unobserved.cols());

  std::vector<LabeledPair> batch;
  batch.reserve(2 * m);
  PredictorParams best = params;
  double best_loss = 0.0;
  double reference = 0.0;
  std::size_t stale = 0;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    batch.clear();
    for (const auto& e : obs.edges()) batch.push_back({e.u, e.v, 1.0});
    if (has_non_edges) {
      for (std::size_t k = 0; k < m; ++k) {
        NodeId i = 0;
        NodeId j = 0;
        do {
          i = static_cast<NodeId>(neg.below(n_obs));
          j = static_cast<NodeId>(neg.below(n_obs));
        } while (i == j || obs.has_edge(i, j));
        batch.push_back({i, j, 0.0});
      }
    }

    const Eigen::MatrixXd agg = a_hat * params.embedding;
    const Eigen::MatrixXd z = agg * params.weight;
    Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(z.rows(), z.cols());
    const double inv = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (const auto& pr : batch) {
      const double s = z.row(pr.i).dot(z.row(pr.j));
      loss += bce_logit(s, pr.label) * inv;
      const double g = (sigmoid(s) - pr.label) * inv;
      dz.row(pr.i) += g * z.row(pr.j);
      dz.row(pr.j) += g * z.row(pr.i);
    }
    loss += 0.5 * kUnobservedWeightDecay * params.unobserved.squaredNorm();
    if (!std::isfinite(loss)) throw TrainingDiverged(epoch);

    if (epoch == 0 || loss < best_loss) {
      best_loss = loss;
      best = params;
    }
    if (epoch == 0 || loss < reference - cfg.tolerance) {
      reference = loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }

    const Eigen::MatrixXd grad_w = agg.transpose() * dz;
    const Eigen::MatrixXd grad_h = a_hat * (dz * params.weight.transpose());
    const Eigen::MatrixXd grad_u = kUnobservedWeightDecay * params.unobserved;
    const long t = static_cast<long>(epoch) + 1;
    slot_h.apply(params.embedding, grad_h, adam, t);
    slot_w.apply(params.weight, grad_w, adam, t);
    slot_u.apply(params.unobserved, grad_u, adam, t);
  }
  return best;
}

Eigen::MatrixXd node_embeddings(const PredictorParams& params, const ObservedSample& sample) {
  const Graph& obs = sample.observed_graph;
  if (static_cast<std::size_t>(params.embedding.rows()) != obs.num_nodes() ||
      params.full_n != sample.original_n) {
    throw DataError("predictor parameters do not match the observed sample");
  }
  const Eigen::MatrixXd z_obs = renormalized_adjacency(obs) * params.embedding * params.weight;
  Eigen::MatrixXd z(static_cast<Eigen::Index>(params.full_n), params.weight.cols());
  std::size_t k = 0;
  std::size_t u = 0;
  for (std::size_t v = 0; v < params.full_n; ++v) {
    const auto row = static_cast<Eigen::Index>(v);
    if (k < sample.kept_nodes.size() && sample.kept_nodes[k] == v) {
      z.row(row) = z_obs.row(static_cast<Eigen::Index>(k++));
    } else {
      z.row(row) = params.unobserved.row(static_cast<Eigen::Index>(u++));
    }
  }
  return z;
}

SoftAdjacency predict_adjacency(const PredictorParams& params, const ObservedSample& known) {
  const Eigen::MatrixXd z = node_embeddings(params, known);
  const Eigen::MatrixXd scores = z * z.transpose();
  SoftAdjacency soft;
  const auto n = scores.rows();
  soft.probs.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    soft.probs(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double p = sigmoid(scores(i, j));
      soft.probs(i, j) = p;
      soft.probs(j, i) = p;
    }
  }
  const Graph& obs = known.observed_graph;
  const auto& kept = known.kept_nodes;
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      const double y = obs.has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)) ? 1.0 : 0.0;
      soft.probs(kept[a], kept[b]) = y;
      soft.probs(kept[b], kept[a]) = y;
    }
  }
  return soft;
}

Graph threshold_adjacency(const SoftAdjacency& soft, double tau) {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("threshold must lie in (0, 1)");
  const auto n = soft.probs.rows();
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (soft.probs(i, j) >= tau) {
        edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), 1.0});
      }
    }
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

Graph soft_to_weighted_graph(const SoftAdjacency& soft, double min_prob) {
  const auto n = soft.probs.rows();
  std::vector<Edge> edges;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double p = soft.probs(i, j);
      if (p >= min_prob) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j), p});
    }
  }
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

std::string soft_adjacency_csv(const SoftAdjacency& soft) {
  std::ostringstream out;
  out.precision(17);
  out << "i,j,prob\n";
  const auto n = soft.probs.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (soft.probs(i, j) >= 1e-3) out << i << ',' << j << ',' << soft.probs(i, j) << '\n';
    }
  }
  return std::move(out).str();
}

double pair_bce(const Eigen::MatrixXd& z, std::span<const LabeledPair> pairs) {
  if (pairs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& pr : pairs) total += bce_logit(z.row(pr.i).dot(z.row(pr.j)), pr.label);
  return total / static_cast<double>(pairs.size());
}

double reconstruction_bce(const PredictorParams& params, const ObservedSample& sample) {
  const Eigen::MatrixXd z = node_embeddings(params, sample);
  std::vector<LabeledPair> pos;
  for (const auto& e : sample.observed_graph.edges()) {
    pos.push_back({sample.kept_nodes[e.u], sample.kept_nodes[e.v], 1.0});
  }
  return pair_bce(z, pos);
}

EdgeSplit split_edges(const Graph& g, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0)) {
    throw InvalidArgument("holdout fraction must lie in (0, 1)");
  }
  const auto n = g.num_nodes();
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  Rng rng(seed);
  rng.shuffle(std::span(edges));
  const auto hold = static_cast<std::size_t>(
      std::llround(holdout_fraction * static_cast<double>(edges.size())));
  if (hold == 0 || hold >= edges.size()) {
    throw InvalidArgument("holdout fraction leaves no edges on one side of the split");
  }

  EdgeSplit split;
  for (std::size_t k = 0; k < hold; ++k) split.held_out.push_back({edges[k].u, edges[k].v, 1.0});
  const std::size_t available = max_edges(n) - g.num_edges();
  std::vector<std::pair<NodeId, NodeId>> negatives;
  while (negatives.size() < std::min(hold, available)) {
    auto i = static_cast<NodeId>(rng.below(n));
    auto j = static_cast<NodeId>(rng.below(n));
    if (i == j || g.has_edge(i, j)) continue;
    if (i > j) std::swap(i, j);
    if (std::find(negatives.begin(), negatives.end(), std::pair{i, j}) != negatives.end()) continue;
    negatives.emplace_back(i, j);
  }
  for (auto [i, j] : negatives) split.held_out.push_back({i, j, 0.0});
  split.train = Graph(n, std::vector<Edge>(edges.begin() + static_cast<std::ptrdiff_t>(hold), edges.end()));
  return split;
}

}  // namespace gdfl
