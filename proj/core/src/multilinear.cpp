#include "gdfl/multilinear.hpp"

#include "gdfl/error.hpp"

namespace gdfl {

double multilinear_value(const SetFunction& f, std::span<const double> x) {
  const std::size_t n = x.size();
  if (n > kMaxMultilinearItems) {
    throw TooLarge("multilinear enumeration limited to " +
                   std::to_string(kMaxMultilinearItems) + " items");
  }
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("x must lie in [0,1]^n");
  }
  if (f(0) != 0.0) throw InvalidArgument("set function must satisfy f(empty) = 0");

  double total = 0.0;
  const std::uint32_t subsets = 1U << n;
  for (std::uint32_t mask = 1; mask < subsets; ++mask) {
    double weight = 1.0;
    for (std::size_t i = 0; i < n && weight != 0.0; ++i) {
      weight *= (mask >> i) & 1U ? x[i] : 1.0 - x[i];
    }
    if (weight != 0.0) total += weight * f(mask);
  }
  return total;
}

CoverageModel::CoverageModel(Eigen::MatrixXd theta) : theta_(std::move(theta)) {
  if (theta_.size() > 0 && !((theta_.array() >= 0.0).all() && (theta_.array() <= 1.0).all())) {
    throw InvalidArgument("coverage probabilities must lie in [0,1]");
  }
}

double CoverageModel::set_value(std::uint32_t mask) const {
  double total = 0.0;
  for (Eigen::Index j = 0; j < theta_.cols(); ++j) {
    double miss = 1.0;
    for (Eigen::Index i = 0; i < theta_.rows(); ++i) {
      if ((mask >> i) & 1U) miss *= 1.0 - theta_(i, j);
    }
    total += 1.0 - miss;
  }
  return total;
}

double CoverageModel::extension(std::span<const double> x) const {
  if (x.size() != items()) throw DimensionMismatch(items(), x.size());
  double total = 0.0;
  for (Eigen::Index j = 0; j < theta_.cols(); ++j) {
    double miss = 1.0;
    for (Eigen::Index i = 0; i < theta_.rows(); ++i) miss *= 1.0 - x[static_cast<std::size_t>(i)] * theta_(i, j);
    total += 1.0 - miss;
  }
  return total;
}

CoverageGradients coverage_multilinear_grads(std::span<const double> x,
                                             const CoverageModel& model) {
  const std::size_t n = model.items();
  const std::size_t m = model.targets();
  if (x.size() != n) throw DimensionMismatch(n, x.size());
  for (double xi : x) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw InvalidArgument("x must lie in [0,1]^n");
  }
  const Eigen::MatrixXd& theta = model.theta();
  auto factor = [&](std::size_t l, std::size_t j) {
    return 1.0 - x[l] * theta(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(j));
  };

  CoverageGradients out;
  out.items = n;
  out.targets = m;
  out.grad_x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  out.cross.assign(n * n * m, 0.0);

  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double others = 1.0;  // prod_{k != i}
      for (std::size_t k = 0; k < n; ++k) {
        if (k != i) others *= factor(k, j);
      }
      const double theta_ij = theta(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out.grad_x(static_cast<Eigen::Index>(i)) += theta_ij * others;
      out.cross[(i * n + i) * m + j] = others;

      for (std::size_t k = 0; k < n; ++k) {
        if (k == i) continue;
        double rest = 1.0;  // prod_{l != i, k}
        for (std::size_t l = 0; l < n; ++l) {
          if (l != i && l != k) rest *= factor(l, j);
        }
        out.cross[(i * n + k) * m + j] = -theta_ij * x[k] * rest;
      }
    }
  }
  return out;
}

}  // namespace gdfl
