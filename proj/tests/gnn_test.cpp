#include "gdfl/gnn.hpp"

#include <gtest/gtest.h>

#include "gdfl/baselines.hpp"
#include "gdfl/error.hpp"
#include "gdfl/rng.hpp"
#include "oracles.hpp"

namespace gdfl {
namespace {

using testing::central_difference;
using testing::max_relative_error;

const Graph kEdge(2, {{0, 1, 1.0}});
const Graph kTriangle(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
const Graph kPath(3, {{0, 1, 1.0}, {1, 2, 1.0}});

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

TEST(GcnInitTest, DeterministicWithExpectedShapes) {
  GcnParams a = init_params(5, 4, 2, 1);
  GcnParams b = init_params(5, 4, 2, 1);
  EXPECT_EQ(a.embedding, b.embedding);
  EXPECT_EQ(a.w0, b.w0);
  EXPECT_EQ(a.w1, b.w1);
  EXPECT_EQ(a.embedding.rows(), 5);
  EXPECT_EQ(a.embedding.cols(), 4);
  EXPECT_EQ(a.w0.rows(), 4);
  EXPECT_EQ(a.w0.cols(), 2);
  EXPECT_EQ(a.w1.rows(), 2);
  EXPECT_EQ(a.w1.cols(), 1);
  EXPECT_NE(init_params(5, 4, 2, 2).embedding, a.embedding);
}

TEST(GcnInitTest, ZeroMeanAtTheInitScale) {
  // 2500 x 4 embedding and 100 x 100 W0: 10^4 draws each.
  GcnParams p = init_params(2500, 4, 2, 17);
  EXPECT_LT(std::abs(p.embedding.mean()), 3.0 * 1.0 / 100.0);
  EXPECT_LE(p.embedding.cwiseAbs().maxCoeff(), 1.0);
  GcnParams wide = init_params(1, 100, 100, 17);
  EXPECT_LT(std::abs(wide.w0.mean()), 3.0 * 0.1 / 100.0);
  EXPECT_LE(wide.w0.cwiseAbs().maxCoeff(), 0.1);
}

TEST(GcnDimsTest, DefaultsFollowNodeCount) {
  EXPECT_EQ(default_dims(4).d0, 32u);
  EXPECT_EQ(default_dims(4).d1, 16u);
  EXPECT_EQ(default_dims(100).d0, 32u);
  EXPECT_EQ(default_dims(2000).d0, 45u);
  EXPECT_EQ(default_dims(2000).d1, 22u);
  EXPECT_EQ(default_dims(100000).d0, 128u);
  TrainConfig cfg;
  cfg.d0 = 6;
  cfg.d1 = 3;
  EXPECT_EQ(resolve_dims(cfg, 100).d0, 6u);
}

TEST(TrainConfigTest, Validates) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.learning_rate = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.max_epochs = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.patience = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = TrainConfig{};
  cfg.tolerance = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(GcnForwardTest, ZeroOutputWeightsGiveOneHalf) {
  Graph g = generate_erdos_renyi(7, 0.4, 2);
  GcnParams p = init_params(7, 4, 2, 3);
  p.w1.setZero();
  SoftAssignment out = forward(p, renormalized_adjacency(g));
  ASSERT_EQ(out.size(), 7);
  for (Eigen::Index i = 0; i < out.size(); ++i) EXPECT_EQ(out(i), 0.5);
}

TEST(GcnForwardTest, IsolatedNodeCollapsesByHand) {
  GcnParams p = init_params(1, 4, 2, 5);
  SoftAssignment out = forward(p, renormalized_adjacency(Graph(1, {})));
  Eigen::RowVectorXd h1 = (p.embedding * p.w0).cwiseMax(0.0);
  const double z = (h1 * p.w1)(0, 0);
  EXPECT_NEAR(out(0), sigmoid(z), 1e-15);
}

TEST(GcnForwardTest, OutputsStayInsideUnitInterval) {
  GcnParams p = init_params(5, 4, 2, 9);
  p.w1 *= 1e6;
  p.w0 *= 1e3;
  SoftAssignment out = forward(p, renormalized_adjacency(generate_erdos_renyi(5, 0.6, 9)));
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    EXPECT_GT(out(i), 0.0);
    EXPECT_LT(out(i), 1.0);
  }
}

TEST(GcnForwardTest, ShapeMismatchThrows) {
  GcnParams p = init_params(5, 4, 2, 0);
  EXPECT_THROW(forward(p, renormalized_adjacency(Graph(4, {}))), DimensionMismatch);
}

TEST(RelaxedLossTest, Examples) {
  QuboMatrix q = build_qubo(ProblemKind::MaxCut, kEdge);
  EXPECT_EQ(relaxed_loss(SoftAssignment::Constant(2, 0.5), q), -0.5);
  QuboMatrix zero(4, {}, 0.0);
  EXPECT_EQ(relaxed_loss(SoftAssignment::LinSpaced(4, 0.1, 0.9), zero), 0.0);
  EXPECT_THROW(relaxed_loss(SoftAssignment::Constant(3, 0.5), q), DimensionMismatch);
}

TEST(RelaxedLossTest, NearBinaryOptimumApproachesOptimalCut) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Graph g = generate_erdos_renyi(4 + seed % 7, 0.4, seed);
    auto opt = brute_force_optimum(ProblemKind::MaxCut, g);
    SoftAssignment p(g.num_nodes());
    for (std::size_t i = 0; i < g.num_nodes(); ++i) p(i) = opt.assignment[i] ? 1.0 - 1e-7 : 1e-7;
    EXPECT_NEAR(relaxed_loss(p, build_qubo(ProblemKind::MaxCut, g)), -opt.objective, 1e-4);
  }
}

struct GradCase {
  Graph g;
  QuboMatrix q;
  GcnParams params;
};

GradCase random_grad_case(std::uint64_t seed, std::size_t n, std::size_t d0, std::size_t d1) {
  Graph g = generate_erdos_renyi(n, 0.5, seed);
  const ProblemKind kinds[] = {ProblemKind::MaxCut, ProblemKind::MIS, ProblemKind::MVC};
  QuboMatrix q = build_qubo(kinds[seed % 3], g);
  return {g, q, init_params(n, d0, d1, seed + 1000)};
}

double analytic_vs_numeric(GradCase& c) {
  const auto a_hat = renormalized_adjacency(c.g);
  GcnGradients grad = backward(c.params, a_hat, c.q);
  auto loss = [&] { return relaxed_loss(forward(c.params, a_hat), c.q); };
  const double h = 1e-5;
  double worst = 0.0;
  worst = std::max(worst, max_relative_error(grad.embedding, central_difference(c.params.embedding, loss, h)));
  worst = std::max(worst, max_relative_error(grad.w0, central_difference(c.params.w0, loss, h)));
  worst = std::max(worst, max_relative_error(grad.w1, central_difference(c.params.w1, loss, h)));
  return worst;
}

TEST(GcnBackwardTest, MatchesFiniteDifferencesOnSpecShape) {
  GradCase c = random_grad_case(42, 6, 4, 3);
  EXPECT_LT(analytic_vs_numeric(c), 1e-4);
}

TEST(GcnBackwardTest, MatchesFiniteDifferencesOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GradCase c = random_grad_case(seed, 3 + seed % 6, 4 + seed % 3, 2 + seed % 2);
    EXPECT_LT(analytic_vs_numeric(c), 1e-4) << "seed " << seed;
  }
}

TEST(GcnBackwardTest, MatchesFiniteDifferencesAtZeroOutputWeights) {
  GradCase c = random_grad_case(7, 6, 4, 3);
  c.params.w1.setZero();
  EXPECT_LT(analytic_vs_numeric(c), 1e-4);
  GcnGradients grad = backward(c.params, renormalized_adjacency(c.g), c.q);
  EXPECT_TRUE(grad.w0.isZero(0.0));
  EXPECT_TRUE(grad.embedding.isZero(0.0));
}

TEST(GcnBackwardTest, ZeroQuboGivesZeroGradients) {
  Graph g = generate_erdos_renyi(6, 0.5, 1);
  GcnParams p = init_params(6, 4, 3, 1);
  GcnGradients grad = backward(p, renormalized_adjacency(g), QuboMatrix(6, {}, 0.0));
  EXPECT_TRUE(grad.embedding.isZero(0.0));
  EXPECT_TRUE(grad.w0.isZero(0.0));
  EXPECT_TRUE(grad.w1.isZero(0.0));
}

TEST(GcnBackwardTest, SmallGradientStepNeverIncreasesLoss) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GradCase c = random_grad_case(seed, 8, 4, 2);
    const auto a_hat = renormalized_adjacency(c.g);
    LossAndGradients lg = loss_and_gradients(c.params, a_hat, c.q);
    GcnParams step = c.params;
    step.embedding -= 1e-6 * lg.grad.embedding;
    step.w0 -= 1e-6 * lg.grad.w0;
    step.w1 -= 1e-6 * lg.grad.w1;
    EXPECT_LE(relaxed_loss(forward(step, a_hat), c.q), lg.loss + 1e-9);
  }
}

// Both rows of the propagation matrix of K2 are (0.5, 0.5), so the two
// outputs always coincide and the relaxed loss 2p^2 - 2p cannot go below
// -0.5. Rounding and polishing still recover the cut.
TEST(GcnTrainTest, SingleEdgeMaxCutReachesSymmetricOptimum) {
  QuboMatrix q = build_qubo(ProblemKind::MaxCut, kEdge);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    TrainResult r = train(kEdge, q, cfg);
    EXPECT_EQ(r.best_p(0), r.best_p(1));
    EXPECT_GE(r.best_loss, -0.5);
    EXPECT_LE(r.best_loss, -0.5 + 1e-3) << "seed " << seed;
    EXPECT_EQ(r.best_loss, relaxed_loss(r.best_p, q));
    auto x = project_and_repair(ProblemKind::MaxCut, kEdge, r.best_p, true);
    EXPECT_EQ(objective(ProblemKind::MaxCut, kEdge, x), 1.0);
  }
}

TEST(GcnTrainTest, PathMaxCutApproachesOptimum) {
  QuboMatrix q = build_qubo(ProblemKind::MaxCut, kPath);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    TrainConfig cfg;
    cfg.seed = seed;
    TrainResult r = train(kPath, q, cfg);
    EXPECT_LE(r.best_loss, -1.9) << "seed " << seed;
  }
}

TEST(GcnTrainTest, RunningBestIsNonIncreasingAndDeterministic) {
  Graph g = generate_d_regular(20, 3, 4);
  QuboMatrix q = build_qubo(ProblemKind::MaxCut, g);
  TrainConfig cfg;
  cfg.max_epochs = 400;
  cfg.seed = 8;
  TrainResult a = train(g, q, cfg);
  TrainResult b = train(g, q, cfg);
  ASSERT_FALSE(a.trace.empty());
  for (std::size_t k = 1; k < a.trace.size(); ++k) {
    EXPECT_LE(a.trace[k].best_loss, a.trace[k - 1].best_loss);
  }
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    EXPECT_EQ(a.trace[k].loss, b.trace[k].loss);
  }
  EXPECT_EQ(a.best_p, b.best_p);
}

TEST(GcnTrainTest, LossShiftMovesRecordsOnly) {
  Graph g = generate_erdos_renyi(10, 0.3, 2);
  QuboMatrix q = build_qubo(ProblemKind::MIS, g);
  TrainConfig cfg;
  cfg.max_epochs = 200;
  TrainResult plain = train(g, q, cfg);
  TrainResult shifted = train(g, q, cfg, 0.75);
  EXPECT_EQ(plain.best_p, shifted.best_p);
  EXPECT_DOUBLE_EQ(shifted.best_loss, plain.best_loss + 0.75);
}

TEST(GcnTrainTest, EarlyStoppingHonoursPatience) {
  QuboMatrix zero(3, {}, 0.0);
  TrainConfig cfg;
  cfg.patience = 5;
  TrainResult r = train(Graph(3, {}), zero, cfg);
  EXPECT_LE(r.trace.size(), 6u);
}

TEST(GcnTrainTest, TraceCsv) {
  std::vector<TraceRow> rows{{0, -0.5, -0.5}, {1, -0.25, -0.5}};
  EXPECT_EQ(trace_csv(rows), "epoch,loss,best_loss\n0,-0.5,-0.5\n1,-0.25,-0.5\n");
}

TEST(ProjectAndRepairTest, MisOnTriangleGivesSingleton) {
  auto x = project_and_repair(ProblemKind::MIS, kTriangle, SoftAssignment::Constant(3, 0.9), false);
  EXPECT_EQ(std::count(x.begin(), x.end(), 1), 1);
  EXPECT_TRUE(is_feasible(ProblemKind::MIS, kTriangle, x));
  // Ties drop the larger index first, leaving node 0.
  EXPECT_EQ(x, (BinaryAssignment{1, 0, 0}));
}

TEST(ProjectAndRepairTest, MvcOnPathFromLowProbabilities) {
  SoftAssignment p = SoftAssignment::Constant(3, 0.1);
  auto raw = project_and_repair(ProblemKind::MVC, kPath, p, false);
  EXPECT_TRUE(is_feasible(ProblemKind::MVC, kPath, raw));
  auto polished = project_and_repair(ProblemKind::MVC, kPath, p, true);
  EXPECT_EQ(objective(ProblemKind::MVC, kPath, polished), 1.0);
}

TEST(ProjectAndRepairTest, RoundsAtOneHalf) {
  SoftAssignment p(4);
  p << 0.5, 0.49, 0.51, 0.0001;
  EXPECT_EQ(project_and_repair(ProblemKind::MaxCut, Graph(4, {}), p, false),
            (BinaryAssignment{1, 0, 1, 0}));
}

TEST(ProjectAndRepairTest, AlwaysFeasibleAndPolishIsMonotone) {
  Rng rng(31);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Graph g = generate_erdos_renyi(15, 0.25, seed);
    SoftAssignment p(15);
    for (Eigen::Index i = 0; i < 15; ++i) p(i) = rng.unit();
    for (auto kind : {ProblemKind::MaxCut, ProblemKind::MIS, ProblemKind::MVC}) {
      auto raw = project_and_repair(kind, g, p, false);
      auto polished = project_and_repair(kind, g, p, true);
      EXPECT_TRUE(is_feasible(kind, g, raw));
      EXPECT_TRUE(is_feasible(kind, g, polished));
      EXPECT_FALSE(improves(kind, objective(kind, g, raw), objective(kind, g, polished)));
      EXPECT_EQ(polished, one_flip_local_search(kind, g, raw));
    }
  }
}

}  // namespace
}  // namespace gdfl
