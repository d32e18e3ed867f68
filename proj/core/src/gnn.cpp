#include "gdfl/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gdfl/adam.hpp"
#include "gdfl/baselines.hpp"
#include "gdfl/error.hpp"
#include "gdfl/rng.hpp"

namespace gdfl {

namespace {

// sigmoid(36) rounds to 1 - 2^-52, keeping p strictly inside (0, 1).
constexpr double kLogitClamp = 36.0;

double sigmoid(double z) {
  z = std::clamp(z, -kLogitClamp, kLogitClamp);
  return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

void fill_uniform(Eigen::MatrixXd& m, double scale, Rng& rng) {
  // Row-major draw order so the layout never depends on Eigen's storage.
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rng.symmetric(scale);
  }
}

void check_shapes(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat) {
  const auto n = params.embedding.rows();
  if (a_hat.rows() != n || a_hat.cols() != n) {
    throw DimensionMismatch(static_cast<std::size_t>(n), static_cast<std::size_t>(a_hat.rows()));
  }
  if (params.w0.rows() != params.embedding.cols() || params.w1.rows() != params.w0.cols() ||
      params.w1.cols() != 1) {
    throw DataError("GCN parameter shapes are inconsistent");
  }
}

struct ForwardCache {
  Eigen::MatrixXd agg0;    // A H
  Eigen::MatrixXd pre1;    // A H W0
  Eigen::MatrixXd hidden;  // relu(pre1)
  Eigen::MatrixXd agg1;    // A hidden
  Eigen::VectorXd logits;
  Eigen::VectorXd p;
};

ForwardCache run_forward(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat) {
  check_shapes(params, a_hat);
  ForwardCache c;
  c.agg0 = a_hat * params.embedding;
  c.pre1 = c.agg0 * params.w0;
  c.hidden = c.pre1.cwiseMax(0.0);
  c.agg1 = a_hat * c.hidden;
  c.logits = c.agg1 * params.w1;
  c.p = c.logits.unaryExpr([](double z) { return sigmoid(z); });
  return c;
}

}  // namespace

void TrainConfig::validate() const {
  if (max_epochs < 1) throw InvalidArgument("max_epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be > 0");
  if (patience < 1) throw InvalidArgument("patience must be >= 1");
  if (!(tolerance >= 0.0)) throw InvalidArgument("tolerance must be >= 0");
}

GcnDims default_dims(std::size_t n) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  const std::size_t d0 = std::min<std::size_t>(128, std::max<std::size_t>(kMinEmbeddingWidth, root));
  return {d0, std::max<std::size_t>(2, d0 / 2)};
}

GcnDims resolve_dims(const TrainConfig& cfg, std::size_t n) {
  GcnDims dims = default_dims(n);
  if (cfg.d0 != 0) dims.d0 = cfg.d0;
  if (cfg.d1 != 0) dims.d1 = cfg.d1;
  return dims;
}

GcnParams init_params(std::size_t n, std::size_t d0, std::size_t d1, std::uint64_t seed) {
  if (d0 < 1 || d1 < 1) throw InvalidArgument("GCN dims must be >= 1");
  Rng rng(seed);
  GcnParams p;
  p.embedding.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d0));
  p.w0.resize(static_cast<Eigen::Index>(d0), static_cast<Eigen::Index>(d1));
  p.w1.resize(static_cast<Eigen::Index>(d1), 1);
  // An embedding row is a lookup on a one-hot input, so its fan-in is 1.
  fill_uniform(p.embedding, 1.0, rng);
  fill_uniform(p.w0, 1.0 / std::sqrt(static_cast<double>(d0)), rng);
  fill_uniform(p.w1, 1.0 / std::sqrt(static_cast<double>(d1)), rng);
  return p;
}

SoftAssignment forward(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat) {
  return run_forward(params, a_hat).p;
}

double relaxed_loss(const SoftAssignment& p, const QuboMatrix& q) {
  return eval_hamiltonian(q, std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
}

LossAndGradients loss_and_gradients(const GcnParams& params,
                                    const Eigen::SparseMatrix<double>& a_hat,
                                    const QuboMatrix& q) {
  ForwardCache c = run_forward(params, a_hat);
  LossAndGradients out;
  out.loss = relaxed_loss(c.p, q);

  const Eigen::VectorXd dp = hamiltonian_gradient(q, c.p);
  Eigen::VectorXd dz(c.p.size());
  for (Eigen::Index i = 0; i < dz.size(); ++i) {
    const bool clamped = std::abs(c.logits(i)) > kLogitClamp;
    dz(i) = clamped ? 0.0 : dp(i) * c.p(i) * (1.0 - c.p(i));
  }

  out.grad.w1 = c.agg1.transpose() * dz;
  // A is symmetric, so A^T dz = A dz.
  const Eigen::VectorXd a_dz = a_hat * dz;
  Eigen::MatrixXd d_pre1 = a_dz * params.w1.transpose();
  d_pre1.array() *= (c.pre1.array() > 0.0).cast<double>();
  out.grad.w0 = c.agg0.transpose() * d_pre1;
  out.grad.embedding = a_hat * (d_pre1 * params.w0.transpose());
  out.p = std::move(c.p);
  return out;
}

GcnGradients backward(const GcnParams& params, const Eigen::SparseMatrix<double>& a_hat,
                      const QuboMatrix& q) {
  return loss_and_gradients(params, a_hat, q).grad;
}

TrainResult train(const Graph& g, const QuboMatrix& q, const TrainConfig& cfg,
                  double loss_shift) {
  cfg.validate();
  if (q.dimension() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), q.dimension());

  const auto a_hat = renormalized_adjacency(g);
  const auto dims = resolve_dims(cfg, g.num_nodes());
  GcnParams params = init_params(g.num_nodes(), dims.d0, dims.d1, cfg.seed);

  AdamSettings adam{.learning_rate = cfg.learning_rate};
  AdamSlot slot_h(params.embedding.rows(), params.embedding.cols());
  AdamSlot slot_w0(params.w0.rows(), params.w0.cols());
  AdamSlot slot_w1(params.w1.rows(), params.w1.cols());

  TrainResult result;
  result.trace.reserve(std::min<std::size_t>(cfg.max_epochs, 1 << 16));
  double reference = 0.0;
  std::size_t stale = 0;

  for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    LossAndGradients step = loss_and_gradients(params, a_hat, q);
    const double loss = step.loss + loss_shift;
    if (!std::isfinite(loss) || !step.grad.embedding.allFinite() || !step.grad.w0.allFinite() ||
        !step.grad.w1.allFinite()) {
      throw TrainingDiverged(epoch);
    }
    if (epoch == 0 || loss < result.best_loss) {
      result.best_loss = loss;
      result.best_p = step.p;
      result.params = params;
    }
    result.trace.push_back({epoch, loss, result.best_loss});

    if (epoch == 0 || loss < reference - cfg.tolerance) {
      reference = loss;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }

    const long t = static_cast<long>(epoch) + 1;
    slot_h.apply(params.embedding, step.grad.embedding, adam, t);
    slot_w0.apply(params.w0, step.grad.w0, adam, t);
    slot_w1.apply(params.w1, step.grad.w1, adam, t);
  }
  return result;
}

std::string trace_csv(const std::vector<TraceRow>& trace) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,loss,best_loss\n";
  for (const auto& r : trace) out << r.epoch << ',' << r.loss << ',' << r.best_loss << '\n';
  return std::move(out).str();
}

BinaryAssignment project_and_repair(ProblemKind kind, const Graph& g, const SoftAssignment& p,
                                    bool polish) {
  const auto n = g.num_nodes();
  if (static_cast<std::size_t>(p.size()) != n) {
    throw DimensionMismatch(n, static_cast<std::size_t>(p.size()));
  }
  BinaryAssignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = p(static_cast<Eigen::Index>(i)) >= 0.5 ? 1 : 0;

  if (kind == ProblemKind::MIS) {
    for (const auto& e : g.edges()) {
      if (!(x[e.u] && x[e.v])) continue;
      // e.u < e.v, so a degree tie drops e.v.
      const NodeId drop = g.degree(e.u) > g.degree(e.v) ? e.u : e.v;
      x[drop] = 0;
    }
    for (NodeId v = 0; v < n; ++v) {
      if (x[v]) continue;
      const auto nb = g.neighbors(v);
      if (std::none_of(nb.begin(), nb.end(), [&](NodeId u) { return x[u] != 0; })) x[v] = 1;
    }
  } else if (kind == ProblemKind::MVC) {
    for (const auto& e : g.edges()) {
      if (x[e.u] || x[e.v]) continue;
      const NodeId take = g.degree(e.v) > g.degree(e.u) ? e.v : e.u;
      x[take] = 1;
    }
    for (std::size_t k = n; k-- > 0;) {
      const auto v = static_cast<NodeId>(k);
      if (!x[v]) continue;
      const auto nb = g.neighbors(v);
      if (std::all_of(nb.begin(), nb.end(), [&](NodeId u) { return x[u] != 0; })) x[v] = 0;
    }
  }

  if (polish) x = one_flip_local_search(kind, g, std::move(x));
  return x;
}

}  // namespace gdfl
