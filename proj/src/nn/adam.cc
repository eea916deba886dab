#include "aquasift/nn/adam.h"

#include <cmath>

namespace aquasift::nn {

Adam::Adam(ParameterSet& params, AdamOptions options)
    : params_(params), options_(options) {
  for (const auto& p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step(double grad_scale) {
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  std::size_t i = 0;
  for (auto& p : params_) {
    Matrix& m = m_[i];
    Matrix& v = v_[i];
    ++i;
    if (p->trainable) {
      const Matrix g = p->grad * grad_scale;
      m = options_.beta1 * m + (1.0 - options_.beta1) * g;
      v = options_.beta2 * v + (1.0 - options_.beta2) * g.cwiseProduct(g);
      p->value.array() -= options_.learning_rate * (m.array() / c1) /
                          ((v.array() / c2).sqrt() + options_.epsilon);
    }
    p->grad.setZero();
  }
}

}  // namespace aquasift::nn
