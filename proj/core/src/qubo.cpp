#include "gdfl/qubo.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

#include "gdfl/error.hpp"

namespace gdfl {

std::string_view to_string(ProblemKind kind) noexcept {
  switch (kind) {
    case ProblemKind::MaxCut:
      return "maxcut";
    case ProblemKind::MIS:
      return "mis";
    case ProblemKind::MVC:
      return "mvc";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "maxcut") return ProblemKind::MaxCut;
  if (lower == "mis") return ProblemKind::MIS;
  if (lower == "mvc") return ProblemKind::MVC;
  throw InvalidArgument("unknown problem '" + std::string(name) +
                        "' (expected maxcut, mis or mvc)");
}

QuboMatrix::QuboMatrix(std::size_t n, std::vector<Entry> entries, double offset,
                       double penalty)
    : n_(n), offset_(offset), penalty_(penalty) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> merged;
  for (const auto& e : entries) {
    if (e.i >= n || e.j >= n) {
      throw DataError("QUBO entry (" + std::to_string(e.i) + "," +
                      std::to_string(e.j) + ") out of range for n=" + std::to_string(n));
    }
    merged[{std::min(e.i, e.j), std::max(e.i, e.j)}] += e.value;
  }
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [key, value] : merged) {
    if (value == 0.0) continue;
    entries_.push_back({key.first, key.second, value});
    trip.emplace_back(key.first, key.second, value);
    if (key.first != key.second) trip.emplace_back(key.second, key.first, value);
  }
  full_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  full_.setFromTriplets(trip.begin(), trip.end());
}

double QuboMatrix::coefficient(std::uint32_t i, std::uint32_t j) const {
  if (i > j) std::swap(i, j);
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j},
                             [](const Entry& e, const std::pair<std::uint32_t, std::uint32_t>& k) {
                               return e.i != k.first ? e.i < k.first : e.j < k.second;
                             });
  if (it != entries_.end() && it->i == i && it->j == j) return it->value;
  return 0.0;
}

QuboMatrix build_qubo(ProblemKind kind, const Graph& g, double penalty) {
  const auto n = g.num_nodes();
  std::vector<QuboMatrix::Entry> entries;
  double offset = 0.0;
  switch (kind) {
    case ProblemKind::MaxCut:
      penalty = 0.0;
      for (const auto& e : g.edges()) {
        entries.push_back({e.u, e.v, e.w});
        entries.push_back({e.u, e.u, -e.w});
        entries.push_back({e.v, e.v, -e.w});
      }
      break;
    case ProblemKind::MIS:
      if (!(penalty > 1.0)) throw InvalidArgument("MIS penalty must exceed 1");
      for (std::uint32_t i = 0; i < n; ++i) entries.push_back({i, i, -1.0});
      for (const auto& e : g.edges()) entries.push_back({e.u, e.v, 0.5 * penalty * e.w});
      break;
    case ProblemKind::MVC:
      if (!(penalty > 1.0)) throw InvalidArgument("MVC penalty must exceed 1");
      for (std::uint32_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
      for (const auto& e : g.edges()) {
        const double pw = penalty * e.w;
        offset += pw;
        entries.push_back({e.u, e.u, -pw});
        entries.push_back({e.v, e.v, -pw});
        entries.push_back({e.u, e.v, 0.5 * pw});
      }
      break;
  }
  return QuboMatrix(n, std::move(entries), offset, penalty);
}

double eval_hamiltonian(const QuboMatrix& q, std::span<const double> x) {
  if (x.size() != q.dimension()) throw DimensionMismatch(q.dimension(), x.size());
  double h = 0.0;
  for (const auto& e : q.entries()) {
    if (e.i == e.j) {
      h += e.value * x[e.i];
    } else {
      h += 2.0 * e.value * x[e.i] * x[e.j];
    }
  }
  return h + q.offset();
}

double eval_hamiltonian(const QuboMatrix& q, const BinaryAssignment& x) {
  std::vector<double> real(x.begin(), x.end());
  return eval_hamiltonian(q, std::span<const double>(real));
}

Eigen::VectorXd hamiltonian_gradient(const QuboMatrix& q, const Eigen::VectorXd& p) {
  if (static_cast<std::size_t>(p.size()) != q.dimension()) {
    throw DimensionMismatch(q.dimension(), static_cast<std::size_t>(p.size()));
  }
  Eigen::VectorXd grad = 2.0 * (q.full() * p);
  for (const auto& e : q.entries()) {
    if (e.i == e.j) grad(e.i) += e.value * (1.0 - 2.0 * p(e.i));
  }
  return grad;
}

double objective(ProblemKind kind, const Graph& g, const BinaryAssignment& x) {
  if (x.size() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), x.size());
  if (kind == ProblemKind::MaxCut) {
    double cut = 0.0;
    for (const auto& e : g.edges()) {
      if (x[e.u] != x[e.v]) cut += e.w;
    }
    return cut;
  }
  double count = 0.0;
  for (auto b : x) count += b ? 1.0 : 0.0;
  return count;
}

bool is_feasible(ProblemKind kind, const Graph& g, const BinaryAssignment& x) {
  if (x.size() != g.num_nodes()) throw DimensionMismatch(g.num_nodes(), x.size());
  switch (kind) {
    case ProblemKind::MaxCut:
      return true;
    case ProblemKind::MIS:
      return std::none_of(g.edges().begin(), g.edges().end(),
                          [&](const Edge& e) { return x[e.u] && x[e.v]; });
    case ProblemKind::MVC:
      return std::all_of(g.edges().begin(), g.edges().end(),
                         [&](const Edge& e) { return x[e.u] || x[e.v]; });
  }
  return false;
}

namespace {

// Walks all 2^n assignments in Gray-code order, calling score(node) after
// each single-bit flip. The lexicographic key puts x_0 in the top bit.
template <typename Flip, typename Consider>
void gray_walk(std::size_t n, BinaryAssignment& x, Flip flip, Consider consider) {
  std::uint64_t key = 0;
  consider(key);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < total; ++k) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(k));
    const std::size_t node = n - 1 - bit;
    flip(node);
    x[node] ^= 1;
    key ^= std::uint64_t{1} << bit;
    consider(key);
  }
}

BinaryAssignment from_key(std::uint64_t key, std::size_t n) {
  BinaryAssignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (key >> (n - 1 - i)) & 1U;
  return x;
}

void check_oracle_size(std::size_t n) {
  if (n > kMaxOracleNodes) {
    throw TooLarge("exhaustive search limited to n <= " + std::to_string(kMaxOracleNodes) +
                   " (got " + std::to_string(n) + ")");
  }
}

}  // namespace

OracleResult brute_force_optimum(ProblemKind kind, const Graph& g) {
  const auto n = g.num_nodes();
  check_oracle_size(n);

  BinaryAssignment x(n, 0);
  double cut = 0.0;
  std::size_t selected = 0;
  std::size_t violations = kind == ProblemKind::MVC ? g.num_edges() : 0;

  bool have_best = false;
  double best_value = 0.0;
  std::uint64_t best_key = 0;

  auto flip = [&](std::size_t i) {
    const auto v = static_cast<NodeId>(i);
    const auto nb = g.neighbors(v);
    const auto ws = g.neighbor_weights(v);
    std::size_t on = 0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
      const bool same = x[nb[k]] == x[i];
      cut += same ? ws[k] : -ws[k];
      on += x[nb[k]];
    }
    const std::size_t off = nb.size() - on;
    if (x[i] == 0) {
      ++selected;
      if (kind == ProblemKind::MIS) violations += on;
      if (kind == ProblemKind::MVC) violations -= off;
    } else {
      --selected;
      if (kind == ProblemKind::MIS) violations -= on;
      if (kind == ProblemKind::MVC) violations += off;
    }
  };
  auto consider = [&](std::uint64_t key) {
    if (violations != 0) return;
    const double value = kind == ProblemKind::MaxCut ? cut : static_cast<double>(selected);
    if (!have_best || improves(kind, value, best_value) ||
        (value == best_value && key < best_key)) {
      have_best = true;
      best_value = value;
      best_key = key;
    }
  };
  gray_walk(n, x, flip, consider);

  OracleResult r;
  r.assignment = from_key(best_key, n);
  r.objective = objective(kind, g, r.assignment);
  return r;
}

OracleResult brute_force_qubo_minimum(const QuboMatrix& q) {
  const auto n = q.dimension();
  check_oracle_size(n);
  const auto& full = q.full();

  BinaryAssignment x(n, 0);
  // field[i] = 2 * sum_{j != i} Q_ij x_j
  std::vector<double> field(n, 0.0);
  std::vector<double> diag(n, 0.0);
  for (const auto& e : q.entries()) {
    if (e.i == e.j) diag[e.i] = e.value;
  }
  double h = q.offset();
  double best_h = 0.0;
  std::uint64_t best_key = 0;
  bool have_best = false;

  auto flip = [&](std::size_t i) {
    const double sign = x[i] ? -1.0 : 1.0;
    h += sign * (diag[i] + field[i]);
    for (Eigen::SparseMatrix<double>::InnerIterator it(full, static_cast<Eigen::Index>(i)); it;
         ++it) {
      const auto j = static_cast<std::size_t>(it.row());
      if (j != i) field[j] += sign * 2.0 * it.value();
    }
  };
  auto consider = [&](std::uint64_t key) {
    if (!have_best || h < best_h || (h == best_h && key < best_key)) {
      have_best = true;
      best_h = h;
      best_key = key;
    }
  };
  gray_walk(n, x, flip, consider);

  OracleResult r;
  r.assignment = from_key(best_key, n);
  r.objective = eval_hamiltonian(q, r.assignment);
  return r;
}

std::string export_qubo(const QuboMatrix& q) {
  std::ostringstream out;
  out.precision(17);
  out << q.dimension() << ' ' << q.offset() << '\n';
  for (const auto& e : q.entries()) out << e.i << ' ' << e.j << ' ' << e.value << '\n';
  return std::move(out).str();
}

QuboMatrix parse_qubo(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0;
  double offset = 0.0;
  bool have_header = false;
  std::vector<QuboMatrix::Entry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string extra;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_header) {
      if (!(ls >> n >> offset) || (ls >> extra)) throw ParseError(line_no, "expected \"n offset\"");
      have_header = true;
      continue;
    }
    long long i = 0;
    long long j = 0;
    double v = 0.0;
    if (!(ls >> i >> j >> v) || (ls >> extra)) throw ParseError(line_no, "expected \"i j coeff\"");
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      throw ParseError(line_no, "index out of range");
    }
    entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), v});
  }
  if (!have_header) throw ParseError(line_no, "missing header");
  return QuboMatrix(n, std::move(entries), offset);
}

}  // namespace gdfl
