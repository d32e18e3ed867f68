// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. With --gset only the Gset check runs;
// it exits 77 (skip) when the instance file cannot be found.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <string>
#include <string_view>
#include <vector>

#include "gdfl/baselines.hpp"
#include "gdfl/bench.hpp"
#include "gdfl/gnn.hpp"
#include "gdfl/graph.hpp"
#include "gdfl/link_predict.hpp"
#include "gdfl/multilinear.hpp"
#include "gdfl/pipeline.hpp"
#include "gdfl/qubo.hpp"
#include "gdfl/reference_values.hpp"
#include "gdfl/rng.hpp"
#include "oracles.hpp"

namespace {

using namespace gdfl;
using Clock = std::chrono::steady_clock;

constexpr ProblemKind kKinds[] = {ProblemKind::MaxCut, ProblemKind::MIS, ProblemKind::MVC};

struct Outcome {
  bool pass;
  std::string detail;
};

// Runs fn(k) for k in [0, count) on a small pool; results keep index order.
template <typename R>
std::vector<R> parallel_map(std::size_t count, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < count; k = next++) out[k] = fn(k);
  };
  std::vector<std::future<void>> pool;
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  for (std::size_t w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, work));
  for (auto& f : pool) f.get();
  return out;
}

Outcome maxcut_identity() {
  Rng rng(1);
  std::size_t checked = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Graph g = generate_erdos_renyi(2 + s % 15, 0.4, 1000 + s);
    QuboMatrix q = build_qubo(ProblemKind::MaxCut, g);
    for (int t = 0; t < 50; ++t) {
      BinaryAssignment x(g.num_nodes());
      for (auto& b : x) b = static_cast<std::uint8_t>(rng.below(2));
      if (-eval_hamiltonian(q, x) != testing::naive_cut(g, x)) {
        return {false, "mismatch on graph " + std::to_string(s)};
      }
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " assignments exact"};
}

Outcome encoding_oracle() {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Graph g = generate_erdos_renyi(3 + s % 10, 0.35, 2000 + s);
    for (auto kind : kKinds) {
      QuboMatrix q = build_qubo(kind, g, 2.0);
      auto naive = testing::naive_qubo_minimisers(q);
      const double best = brute_force_optimum(kind, g).objective;
      for (const auto& x : naive.argmins) {
        if (!is_feasible(kind, g, x) || sign_adjusted(kind, naive.value) != best) {
          return {false, std::string(to_string(kind)) + " on graph " + std::to_string(s)};
        }
      }
    }
  }
  return {true, "30 graphs x 3 problems exact"};
}

Outcome gradient_check() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const std::size_t n = 3 + s % 6;
    Graph g = generate_erdos_renyi(n, 0.5, 3000 + s);
    QuboMatrix q = build_qubo(kKinds[s % 3], g);
    GcnParams params = init_params(n, 4 + s % 3, 2 + s % 2, 3000 + s);
    const auto a_hat = renormalized_adjacency(g);
    GcnGradients grad = backward(params, a_hat, q);
    auto loss = [&] { return relaxed_loss(forward(params, a_hat), q); };
    worst = std::max(worst, testing::max_relative_error(
                                grad.embedding, testing::central_difference(params.embedding, loss, 1e-5)));
    worst = std::max(worst, testing::max_relative_error(
                                grad.w0, testing::central_difference(params.w0, loss, 1e-5)));
    worst = std::max(worst, testing::max_relative_error(
                                grad.w1, testing::central_difference(params.w1, loss, 1e-5)));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative error %.3e", worst);
  return {worst < 1e-4, buf};
}

double coverage_value(const std::vector<double>& x, const Eigen::MatrixXd& theta) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < theta.cols(); ++j) {
    double miss = 1.0;
    for (Eigen::Index i = 0; i < theta.rows(); ++i) miss *= 1.0 - x[i] * theta(i, j);
    total += 1.0 - miss;
  }
  return total;
}

double coverage_partial(std::vector<double> x, const Eigen::MatrixXd& theta, std::size_t i) {
  x[i] = 1.0;
  const double hi = coverage_value(x, theta);
  x[i] = 0.0;
  return hi - coverage_value(x, theta);
}

Outcome multilinear_check() {
  Rng rng(4);
  const double h = 1e-6;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t items = 1 + t % 5;
    const std::size_t targets = 1 + (t / 5) % 4;
    Eigen::MatrixXd theta(items, targets);
    for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = 0.01 + 0.98 * rng.unit();
    std::vector<double> x(items);
    for (auto& v : x) v = rng.unit();
    CoverageModel model(theta);
    auto grads = coverage_multilinear_grads(x, model);
    for (std::size_t i = 0; i < items; ++i) {
      for (std::size_t k = 0; k < items; ++k) {
        for (std::size_t j = 0; j < targets; ++j) {
          Eigen::MatrixXd up = theta;
          Eigen::MatrixXd down = theta;
          up(k, j) += h;
          down(k, j) -= h;
          const double fd = (coverage_partial(x, up, i) - coverage_partial(x, down, i)) / (2 * h);
          worst = std::max(worst, std::abs(grads.at(i, k, j) - fd));
        }
      }
    }
    SetFunction f = [&](std::uint32_t m) { return model.set_value(m); };
    for (std::uint32_t m = 0; m < (1U << items); ++m) {
      std::vector<double> corner(items);
      for (std::size_t i = 0; i < items; ++i) corner[i] = (m >> i) & 1U;
      if (multilinear_value(f, corner) != model.set_value(m)) {
        return {false, "corner mismatch on instance " + std::to_string(t)};
      }
    }
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "max abs error %.3e, corners exact", worst);
  return {worst < 1e-6, buf};
}

// Per instance, the mean objective over the seeds must reach 90% of the
// optimum (at most optimum / 0.9 when minimising).
Outcome solver_quality() {
  constexpr std::size_t kInstances = 30;
  constexpr std::size_t kSeeds = 3;
  std::string detail;
  bool pass = true;
  for (auto kind : kKinds) {
    auto values = parallel_map<double>(kInstances * kSeeds, [&](std::size_t k) {
      Graph g = generate_erdos_renyi(12, 0.3, 5000 + k / kSeeds);
      TrainConfig cfg;
      cfg.seed = k % kSeeds;
      TrainResult r = train(g, build_qubo(kind, g), cfg);
      auto x = project_and_repair(kind, g, r.best_p, true);
      return is_feasible(kind, g, x) ? objective(kind, g, x) : std::nan("");
    });
    std::size_t good = 0;
    for (std::size_t inst = 0; inst < kInstances; ++inst) {
      Graph g = generate_erdos_renyi(12, 0.3, 5000 + inst);
      const double best = brute_force_optimum(kind, g).objective;
      double sum = 0.0;
      for (std::size_t s = 0; s < kSeeds; ++s) sum += values[inst * kSeeds + s];
      // Objectives are integers here, so compare scaled sums exactly.
      const double seeds = static_cast<double>(kSeeds);
      const bool ok = sense_of(kind) == Sense::Maximize ? 10.0 * sum >= 9.0 * seeds * best
                                                        : 9.0 * sum <= 10.0 * seeds * best;
      good += ok;
    }
    pass = pass && good * 10 >= kInstances * 8;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s %zu/%zu", std::string(to_string(kind)).c_str(), good, kInstances);
    detail += (detail.empty() ? "" : ", ") + std::string(buf);
  }
  return {pass, detail + " instances at >= 90% of optimum (mean of 3 seeds)"};
}

Outcome epsilon_table() {
  for (const auto& row : kGsetReference) {
    const double pct = std::round(relative_error(row.g_dfl4co, row.bls) * 10000.0) / 100.0;
    if (pct != row.epsilon_percent) return {false, std::string(row.instance)};
  }
  return {true, "7/7 rows reproduced"};
}

Outcome d_regular_comparison() {
  struct Run {
    double pipeline_cut = 0.0;
    double dga_cut = 0.0;
    bool feasible = true;
  };
  auto runs = parallel_map<Run>(20, [](std::size_t k) {
    Graph g = generate_d_regular(100, 3, 6000 + k);
    Run run;
    for (auto kind : kKinds) {
      PipelineConfig cfg;
      cfg.kind = kind;
      cfg.observe_fraction = 1.0;
      cfg.seed = k;
      cfg.solver_cfg.seed = k;
      cfg.predictor_cfg.seed = k;
      PipelineResult r = end_to_end_solve(g, cfg);
      if (kind == ProblemKind::MaxCut) {
        run.pipeline_cut = r.objective_true;
        run.dga_cut = objective(kind, g, dga(kind, g));
      } else {
        run.feasible = run.feasible && r.feasible_true && is_feasible(kind, g, r.assignment);
      }
    }
    return run;
  });
  double pipeline = 0.0;
  double greedy = 0.0;
  bool feasible = true;
  for (const auto& r : runs) {
    pipeline += r.pipeline_cut / 20.0;
    greedy += r.dga_cut / 20.0;
    feasible = feasible && r.feasible;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "mean cut pipeline %.2f vs dga %.2f; MIS/MVC feasible %s", pipeline,
                greedy, feasible ? "100%" : "<100%");
  return {pipeline >= greedy && feasible, buf};
}

Outcome reduction_identity() {
  auto same = parallel_map<int>(10, [](std::size_t k) {
    const ProblemKind kind = kKinds[k % 3];
    Graph g = generate_erdos_renyi(20, 0.2, 7000 + k);
    if (g.num_edges() == 0) g = generate_d_regular(20, 3, k);
    PipelineConfig cfg;
    cfg.kind = kind;
    cfg.observe_fraction = 1.0;
    cfg.lambda = 0.0;
    cfg.seed = k;
    cfg.solver_cfg.seed = k;
    PipelineResult r = end_to_end_solve(g, cfg);
    TrainResult solo = train(g, build_qubo(kind, g, cfg.penalty), cfg.solver_cfg);
    return int(r.assignment == project_and_repair(kind, g, solo.best_p, cfg.polish));
  });
  int hits = 0;
  for (int s : same) hits += s;
  return {hits == 10, std::to_string(hits) + "/10 assignments bit-identical"};
}

double constant_bce(double rate, const std::vector<LabeledPair>& pairs) {
  double total = 0.0;
  for (const auto& p : pairs) total -= p.label * std::log(rate) + (1 - p.label) * std::log(1 - rate);
  return total / static_cast<double>(pairs.size());
}

Outcome link_prediction() {
  auto wins = parallel_map<int>(10, [](std::size_t k) {
    Graph g = generate_erdos_renyi(60, 0.1, 8000 + k);
    ObservedSample full = sample_observed_subgraph(g, 0.8, k);
    EdgeSplit split = split_edges(full.observed_graph, 0.1, k);
    ObservedSample train_view{full.kept_nodes, split.train, full.original_n};
    TrainConfig cfg = default_predictor_config();
    cfg.seed = k;
    PredictorParams params = train_predictor(train_view, 60, cfg);
    Eigen::MatrixXd z_all = node_embeddings(params, train_view);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(full.kept_nodes.size()), z_all.cols());
    for (std::size_t v = 0; v < full.kept_nodes.size(); ++v) {
      z.row(static_cast<Eigen::Index>(v)) = z_all.row(full.kept_nodes[v]);
    }
    const double n_obs = static_cast<double>(full.kept_nodes.size());
    const double density = static_cast<double>(split.train.num_edges()) / (n_obs * (n_obs - 1) / 2);
    return int(pair_bce(z, split.held_out) < constant_bce(density, split.held_out));
  });
  int total = 0;
  for (int w : wins) total += w;
  return {total >= 8, std::to_string(total) + "/10 runs below constant-density BCE"};
}

std::filesystem::path find_g14() {
  std::vector<std::filesystem::path> dirs;
  if (const char* env = std::getenv("GDFL_GSET_DIR")) dirs.emplace_back(env);
  dirs.emplace_back("data/gset");
  for (const auto& d : dirs) {
    for (const char* name : {"G14", "G14.txt", "G14.gz"}) {
      if (std::filesystem::exists(d / name)) return d / name;
    }
  }
  return {};
}

int run_gset() {
  const auto path = find_g14();
  if (path.empty()) {
    std::printf("SKIP criterion 6: G14 not found (set GDFL_GSET_DIR or place it in data/gset)\n");
    return 77;
  }
  const auto start = Clock::now();
  Graph g = read_gset_file(path);
  TrainConfig cfg;
  TrainResult r = train(g, build_qubo(ProblemKind::MaxCut, g), cfg);
  auto x = project_and_repair(ProblemKind::MaxCut, g, r.best_p, true);
  const double cut = objective(ProblemKind::MaxCut, g, x);
  const double minutes = std::chrono::duration<double>(Clock::now() - start).count() / 60.0;
  const bool pass = cut >= 2943 && minutes <= 30.0;
  std::printf("%s criterion 6: G14 cut %.0f (gate 2943, published 3060) in %.1f min\n",
              pass ? "PASS" : "FAIL", cut, minutes);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::string_view(argv[1]) == "--gset") return run_gset();

  struct Criterion {
    int id;
    double limit_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, 5, maxcut_identity},      {2, 60, encoding_oracle},      {3, 10, gradient_check},
      {4, 5, multilinear_check},    {5, 600, solver_quality},      {7, 1, epsilon_table},
      {8, 1200, d_regular_comparison}, {9, 300, reduction_identity}, {10, 600, link_prediction},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    Outcome out = c.run();
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    const bool pass = out.pass && secs <= c.limit_s;
    all = all && pass;
    std::printf("%s criterion %d: %s (%.2f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id,
                out.detail.c_str(), secs, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("criterion 6 runs as the separate acceptance_gset test\n");
  return all ? 0 : 1;
}
