#include "gdfl/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "gdfl/error.hpp"

namespace gdfl {

namespace {

constexpr double kGainEps = 1e-12;

BinaryAssignment dga_maxcut(const Graph& g) {
  const auto n = g.num_nodes();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });

  BinaryAssignment x(n, 0);
  std::vector<std::uint8_t> placed(n, 0);
  for (NodeId v : order) {
    double cut_if_s = 0.0;  // weight to placed neighbours on side T
    double cut_if_t = 0.0;
    const auto nb = g.neighbors(v);
    const auto ws = g.neighbor_weights(v);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (!placed[nb[k]]) continue;
      (x[nb[k]] ? cut_if_t : cut_if_s) += ws[k];
    }
    x[v] = cut_if_s >= cut_if_t ? 1 : 0;
    placed[v] = 1;
  }
  return x;
}

// Residual-degree greedy shared by MIS and MVC. Keys are ordered so that
// begin() is the node to take next.
BinaryAssignment dga_residual(ProblemKind kind, const Graph& g) {
  const auto n = g.num_nodes();
  const bool take_min = kind == ProblemKind::MIS;
  std::vector<std::int64_t> deg(n);
  std::vector<std::uint8_t> alive(n, 1);
  auto key = [&](NodeId v) {
    return std::pair{take_min ? deg[v] : -deg[v], v};
  };
  std::set<std::pair<std::int64_t, NodeId>> queue;
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = static_cast<std::int64_t>(g.neighbor_count(v));
    queue.insert(key(v));
  }

  auto remove = [&](NodeId v) {
    queue.erase(key(v));
    alive[v] = 0;
    for (NodeId u : g.neighbors(v)) {
      if (!alive[u]) continue;
      queue.erase(key(u));
      --deg[u];
      queue.insert(key(u));
    }
  };

  BinaryAssignment x(n, 0);
  while (!queue.empty()) {
    const NodeId v = queue.begin()->second;
    if (kind == ProblemKind::MVC && deg[v] == 0) break;
    x[v] = 1;
    if (kind == ProblemKind::MIS) {
      std::vector<NodeId> drop;
      for (NodeId u : g.neighbors(v)) {
        if (alive[u]) drop.push_back(u);
      }
      remove(v);
      for (NodeId u : drop) remove(u);
    } else {
      remove(v);
    }
  }
  return x;
}

}  // namespace

BinaryAssignment dga(ProblemKind kind, const Graph& g) {
  if (kind == ProblemKind::MaxCut) return dga_maxcut(g);
  return dga_residual(kind, g);
}

BinaryAssignment one_flip_local_search(ProblemKind kind, const Graph& g,
                                       BinaryAssignment x) {
  if (!is_feasible(kind, g, x)) {
    throw InvalidArgument("local search needs a feasible starting assignment");
  }
  const auto n = g.num_nodes();

  if (kind == ProblemKind::MaxCut) {
    // gain[v]: change in cut weight if v switches side.
    std::vector<double> gain(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      const auto ws = g.neighbor_weights(v);
      for (std::size_t k = 0; k < nb.size(); ++k) gain[v] += x[nb[k]] == x[v] ? ws[k] : -ws[k];
    }
    bool improved = true;
    while (improved) {
      improved = false;
      for (NodeId v = 0; v < n; ++v) {
        if (gain[v] <= kGainEps) continue;
        x[v] ^= 1;
        gain[v] = -gain[v];
        const auto nb = g.neighbors(v);
        const auto ws = g.neighbor_weights(v);
        for (std::size_t k = 0; k < nb.size(); ++k) {
          gain[nb[k]] += x[nb[k]] == x[v] ? 2.0 * ws[k] : -2.0 * ws[k];
        }
        improved = true;
      }
    }
    return x;
  }

  // MIS only gains by adding a node with no selected neighbour; MVC only
  // gains by dropping a node whose neighbours are all selected.
  std::vector<std::size_t> selected_nb(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) selected_nb[v] += x[u];
  }
  bool improved = true;
  while (improved) {
    improved = false;
    for (NodeId v = 0; v < n; ++v) {
      const bool admissible = kind == ProblemKind::MIS
                                  ? (!x[v] && selected_nb[v] == 0)
                                  : (x[v] && selected_nb[v] == g.neighbor_count(v));
      if (!admissible) continue;
      x[v] ^= 1;
      for (NodeId u : g.neighbors(v)) {
        if (x[v]) {
          ++selected_nb[u];
        } else {
          --selected_nb[u];
        }
      }
      improved = true;
    }
  }
  return x;
}

}  // namespace gdfl
