#ifndef GDFL_ADAM_HPP
#define GDFL_ADAM_HPP

#include <cmath>

#include <Eigen/Core>

namespace gdfl {

struct AdamSettings {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive moment estimation for a single dense parameter block.
class AdamSlot {
 public:
  AdamSlot() = default;
  AdamSlot(Eigen::Index rows, Eigen::Index cols)
      : m_(Eigen::MatrixXd::Zero(rows, cols)), v_(Eigen::MatrixXd::Zero(rows, cols)) {}

  // step is 1-based.
  void apply(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad,
             const AdamSettings& s, long step) {
    m_ = s.beta1 * m_ + (1.0 - s.beta1) * grad;
    v_ = s.beta2 * v_ + (1.0 - s.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(step));
    param.array() -= s.learning_rate * (m_.array() / c1) /
                     ((v_.array() / c2).sqrt() + s.epsilon);
  }

 private:
  Eigen::MatrixXd m_;
  Eigen::MatrixXd v_;
};

}  // namespace gdfl

#endif  // GDFL_ADAM_HPP
