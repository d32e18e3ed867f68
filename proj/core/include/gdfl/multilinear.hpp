#ifndef GDFL_MULTILINEAR_HPP
#define GDFL_MULTILINEAR_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace gdfl {

// Set function over item subsets encoded as bit masks (bit i = item i).
using SetFunction = std::function<double(std::uint32_t)>;

inline constexpr std::size_t kMaxMultilinearItems = 16;

/// Multilinear extension F(x) = E[f(S)] where each item i joins S
/// independently with probability x_i. Exact enumeration over 2^n subsets;
/// n <= 16 and f(empty) = 0 are required.
double multilinear_value(const SetFunction& f, std::span<const double> x);

// Probabilistic coverage: item i covers target j with probability theta(i, j).
class CoverageModel {
 public:
  explicit CoverageModel(Eigen::MatrixXd theta);

  const Eigen::MatrixXd& theta() const noexcept { return theta_; }
  std::size_t items() const noexcept { return static_cast<std::size_t>(theta_.rows()); }
  std::size_t targets() const noexcept { return static_cast<std::size_t>(theta_.cols()); }

  // f(S) = sum_j [1 - prod_{i in S} (1 - theta_ij)]
  double set_value(std::uint32_t mask) const;

  // F(x) = sum_j [1 - prod_i (1 - x_i theta_ij)]
  double extension(std::span<const double> x) const;

 private:
  Eigen::MatrixXd theta_;
};

struct CoverageGradients {
  Eigen::VectorXd grad_x;  // dF/dx_i
  // d/dtheta_kj of dF/dx_i, stored at [(i * items + k) * targets + j].
  std::vector<double> cross;
  std::size_t items = 0;
  std::size_t targets = 0;

  double at(std::size_t i, std::size_t k, std::size_t j) const {
    return cross[(i * items + k) * targets + j];
  }
};

/**
 * Closed-form gradients of the coverage extension.
 *
 *   dF/dx_i                 = sum_j theta_ij prod_{k != i} (1 - x_k theta_kj)
 *   d/dtheta_kj dF/dx_i     = -theta_ij x_k prod_{l != i,k} (1 - x_l theta_lj)   (k != i)
 *                           = prod_{k != i} (1 - x_k theta_kj)                     (k == i)
 *
 * Products are formed directly (no division), so entries equal to one in
 * x * theta are handled exactly.
 */
CoverageGradients coverage_multilinear_grads(std::span<const double> x,
                                             const CoverageModel& model);

}  // namespace gdfl

#endif  // GDFL_MULTILINEAR_HPP
