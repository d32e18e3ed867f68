#ifndef GDFL_QUBO_HPP
#define GDFL_QUBO_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "gdfl/graph.hpp"

namespace gdfl {

enum class ProblemKind { MaxCut, MIS, MVC };

enum class Sense { Maximize, Minimize };

constexpr Sense sense_of(ProblemKind kind) noexcept {
  return kind == ProblemKind::MVC ? Sense::Minimize : Sense::Maximize;
}

std::string_view to_string(ProblemKind kind) noexcept;
// Accepts "maxcut", "mis", "mvc" (case-insensitive).
ProblemKind parse_problem_kind(std::string_view name);

using BinaryAssignment = std::vector<std::uint8_t>;

inline constexpr double kDefaultPenalty = 2.0;

/**
 * Symmetric QUBO matrix with a constant offset: H(x) = x^T Q x + offset.
 *
 * Off-diagonal entries are stored once with i < j and hold the symmetric
 * value Q_ij = Q_ji, so the pair contributes 2 Q_ij x_i x_j. Diagonal
 * entries carry the linear coefficients (x_i^2 = x_i on binaries).
 */
class QuboMatrix {
 public:
  struct Entry {
    std::uint32_t i;
    std::uint32_t j;
    double value;
  };

  QuboMatrix() = default;
  QuboMatrix(std::size_t n, std::vector<Entry> entries, double offset,
             double penalty = 0.0);

  std::size_t dimension() const noexcept { return n_; }
  double offset() const noexcept { return offset_; }
  double penalty() const noexcept { return penalty_; }

  // Canonical entries (i <= j), sorted, zero entries dropped.
  std::span<const Entry> entries() const noexcept { return entries_; }

  // Q_ij for any ordering of (i, j); zero when absent.
  double coefficient(std::uint32_t i, std::uint32_t j) const;

  // Full symmetric matrix with both triangles populated.
  const Eigen::SparseMatrix<double>& full() const noexcept { return full_; }

 private:
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
  double offset_ = 0.0;
  double penalty_ = 0.0;
  Eigen::SparseMatrix<double> full_;
};

// MaxCut: sum_E w (2 x_i x_j - x_i - x_j)
// MIS:    -sum_i x_i + P sum_E w x_i x_j
// MVC:     sum_i x_i + P sum_E w (1 - x_i)(1 - x_j)
// H is minimised in every case. Throws InvalidArgument if penalty <= 1 for
// MIS/MVC.
QuboMatrix build_qubo(ProblemKind kind, const Graph& g,
                      double penalty = kDefaultPenalty);

// sum_i Q_ii x_i + sum_{i != j} Q_ij x_i x_j + offset. Diagonal entries are
// linear coefficients, so on binary x this is x^T Q x + offset, and on
// relaxed x it is the expectation of H under independent Bernoulli(x).
double eval_hamiltonian(const QuboMatrix& q, std::span<const double> x);
double eval_hamiltonian(const QuboMatrix& q, const BinaryAssignment& x);

// Gradient of the relaxed form: Q_ii + 2 sum_{j != i} Q_ij p_j.
Eigen::VectorXd hamiltonian_gradient(const QuboMatrix& q, const Eigen::VectorXd& p);

// MaxCut: weight of cut edges. MIS/MVC: number of selected nodes.
double objective(ProblemKind kind, const Graph& g, const BinaryAssignment& x);

bool is_feasible(ProblemKind kind, const Graph& g, const BinaryAssignment& x);

// Maps an H value at a binary minimiser onto the problem objective scale.
inline double sign_adjusted(ProblemKind kind, double h) {
  return sense_of(kind) == Sense::Maximize ? -h : h;
}

// True iff a is strictly better than b in the problem's sense.
inline bool improves(ProblemKind kind, double a, double b) {
  return sense_of(kind) == Sense::Maximize ? a > b : a < b;
}

struct OracleResult {
  BinaryAssignment assignment;
  double objective = 0.0;
};

inline constexpr std::size_t kMaxOracleNodes = 24;

// Exhaustive search over all 2^n assignments; ties go to the
// lexicographically smallest bit string (x_0 most significant).
OracleResult brute_force_optimum(ProblemKind kind, const Graph& g);

// Exhaustive minimisation of H; same tie rule as brute_force_optimum.
OracleResult brute_force_qubo_minimum(const QuboMatrix& q);

// "n offset" header, then one "i j coeff" line per canonical entry (0-based).
std::string export_qubo(const QuboMatrix& q);
QuboMatrix parse_qubo(std::string_view text);

}  // namespace gdfl

#endif  // GDFL_QUBO_HPP
