#include "aquasift/nn/tape.h"

#include <cmath>
#include <stdexcept>

namespace aquasift::nn {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Parameter& ParameterSet::add(const std::string& name, Matrix init) {
  params_.push_back(std::make_unique<Parameter>(name, std::move(init)));
  return *params_.back();
}

Parameter& ParameterSet::get(const std::string& name) {
  for (auto& p : params_) {
    if (p->name == name) return *p;
  }
  throw std::out_of_range("no parameter named " + name);
}

const Parameter& ParameterSet::get(const std::string& name) const {
  return const_cast<ParameterSet*>(this)->get(name);
}

std::size_t ParameterSet::count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

void ParameterSet::zero_grad() {
  for (auto& p : params_) p->grad.setZero();
}

Tape::Var Tape::push(Matrix value, bool requires_grad) {
  nodes_.push_back(Node{std::move(value), nullptr, Matrix(), requires_grad, nullptr});
  return Var{nodes_.size() - 1};
}

const Matrix& Tape::value(Var v) const {
  const Node& n = nodes_[v.id];
  return n.ref ? *n.ref : n.value;
}

const Matrix& Tape::grad(Var v) const { return nodes_[v.id].grad; }

void Tape::accumulate(Var v, const Matrix& g) {
  Node& n = nodes_[v.id];
  if (!n.requires_grad) return;
  if (n.grad.size() == 0) {
    n.grad = g;
  } else {
    n.grad += g;
  }
}

Tape::Var Tape::constant(Matrix value) { return push(std::move(value), false); }

Tape::Var Tape::param(const Parameter& p) {
  Var v = push(Matrix(), true);
  nodes_[v.id].ref = &p.value;
  nodes_[v.id].backprop = [this, v, &p] { p.grad += nodes_[v.id].grad; };
  return v;
}

Tape::Var Tape::matmul(Var a, Var b) {
  Var out = push(value(a) * value(b), needs(a) || needs(b));
  nodes_[out.id].backprop = [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(a)) accumulate(a, g * value(b).transpose());
    if (needs(b)) accumulate(b, value(a).transpose() * g);
  };
  return out;
}

Tape::Var Tape::matmul_nt(Var a, Var b) {
  Var out = push(value(a) * value(b).transpose(), needs(a) || needs(b));
  nodes_[out.id].backprop = [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(a)) accumulate(a, g * value(b));
    if (needs(b)) accumulate(b, g.transpose() * value(a));
  };
  return out;
}

Tape::Var Tape::add(Var a, Var b) {
  Var out = push(value(a) + value(b), needs(a) || needs(b));
  nodes_[out.id].backprop = [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    accumulate(a, g);
    accumulate(b, g);
  };
  return out;
}

Tape::Var Tape::add_row(Var a, Var row) {
  Matrix v = value(a);
  v.rowwise() += value(row).row(0);
  Var out = push(std::move(v), needs(a) || needs(row));
  nodes_[out.id].backprop = [this, a, row, out] {
    const Matrix& g = nodes_[out.id].grad;
    accumulate(a, g);
    if (needs(row)) accumulate(row, g.colwise().sum());
  };
  return out;
}

Tape::Var Tape::mul(Var a, Var b) {
  Var out = push(value(a).cwiseProduct(value(b)), needs(a) || needs(b));
  nodes_[out.id].backprop = [this, a, b, out] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(a)) accumulate(a, g.cwiseProduct(value(b)));
    if (needs(b)) accumulate(b, g.cwiseProduct(value(a)));
  };
  return out;
}

Tape::Var Tape::scale(Var a, double s) {
  Var out = push(value(a) * s, needs(a));
  nodes_[out.id].backprop = [this, a, s, out] {
    accumulate(a, nodes_[out.id].grad * s);
  };
  return out;
}

Tape::Var Tape::sigmoid(Var a) {
  Var out = push(value(a).unaryExpr([](double x) { return nn::sigmoid(x); }),
                 needs(a));
  nodes_[out.id].backprop = [this, a, out] {
    const Matrix& y = nodes_[out.id].value;
    accumulate(a, nodes_[out.id].grad.cwiseProduct(
                      y.cwiseProduct((1.0 - y.array()).matrix())));
  };
  return out;
}

Tape::Var Tape::tanh(Var a) {
  Var out = push(value(a).array().tanh().matrix(), needs(a));
  nodes_[out.id].backprop = [this, a, out] {
    const Matrix& y = nodes_[out.id].value;
    accumulate(a, nodes_[out.id].grad.cwiseProduct(
                      (1.0 - y.array().square()).matrix()));
  };
  return out;
}

namespace {
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;
}  // namespace

Tape::Var Tape::gelu(Var a) {
  Var out = push(value(a).unaryExpr([](double x) {
    return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
  }),
                 needs(a));
  nodes_[out.id].backprop = [this, a, out] {
    Matrix d = value(a).unaryExpr([](double x) {
      const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
      return 0.5 * (1.0 + t) +
             0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
    });
    accumulate(a, nodes_[out.id].grad.cwiseProduct(d));
  };
  return out;
}

Tape::Var Tape::softmax_rows(Var a) {
  Matrix y = value(a);
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    const double m = y.row(r).maxCoeff();
    y.row(r) = (y.row(r).array() - m).exp().matrix();
    y.row(r) /= y.row(r).sum();
  }
  Var out = push(std::move(y), needs(a));
  nodes_[out.id].backprop = [this, a, out] {
    const Matrix& y = nodes_[out.id].value;
    const Matrix& g = nodes_[out.id].grad;
    Matrix dot = g.cwiseProduct(y).rowwise().sum();
    Matrix dx = g;
    dx.colwise() -= dot.col(0);
    accumulate(a, dx.cwiseProduct(y));
  };
  return out;
}

Tape::Var Tape::layer_norm_rows(Var x, Var gamma, Var beta, double eps) {
  const Matrix& xv = value(x);
  const Eigen::Index d = xv.cols();
  Matrix xhat(xv.rows(), d);
  Eigen::VectorXd inv_std(xv.rows());
  for (Eigen::Index r = 0; r < xv.rows(); ++r) {
    const double mu = xv.row(r).mean();
    const double var = (xv.row(r).array() - mu).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    xhat.row(r) = (xv.row(r).array() - mu) * inv_std(r);
  }
  Matrix y = xhat.array().rowwise() * value(gamma).row(0).array();
  y.rowwise() += value(beta).row(0);
  Var out = push(std::move(y), needs(x) || needs(gamma) || needs(beta));
  nodes_[out.id].backprop = [this, x, gamma, beta, out, xhat = std::move(xhat),
                             inv_std = std::move(inv_std), d] {
    const Matrix& g = nodes_[out.id].grad;
    if (needs(gamma)) accumulate(gamma, g.cwiseProduct(xhat).colwise().sum());
    if (needs(beta)) accumulate(beta, g.colwise().sum());
    if (needs(x)) {
      Matrix dxhat = g.array().rowwise() * value(gamma).row(0).array();
      Matrix dx(dxhat.rows(), d);
      for (Eigen::Index r = 0; r < dxhat.rows(); ++r) {
        const double mean_g = dxhat.row(r).mean();
        const double mean_gx = dxhat.row(r).cwiseProduct(xhat.row(r)).mean();
        dx.row(r) = inv_std(r) * (dxhat.row(r).array() - mean_g -
                                  xhat.row(r).array() * mean_gx);
      }
      accumulate(x, dx);
    }
  };
  return out;
}

Tape::Var Tape::gather_rows(const Parameter& table, std::span<const int> ids) {
  Matrix v(static_cast<Eigen::Index>(ids.size()), table.value.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    v.row(static_cast<Eigen::Index>(i)) = table.value.row(ids[i]);
  }
  Var out = push(std::move(v), true);
  nodes_[out.id].backprop = [this, out, &table,
                             ids = std::vector<int>(ids.begin(), ids.end())] {
    const Matrix& g = nodes_[out.id].grad;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      table.grad.row(ids[i]) += g.row(static_cast<Eigen::Index>(i));
    }
  };
  return out;
}

Tape::Var Tape::cols(Var a, Eigen::Index start, Eigen::Index n) {
  Var out = push(value(a).middleCols(start, n), needs(a));
  nodes_[out.id].backprop = [this, a, start, n, out] {
    Matrix g = Matrix::Zero(value(a).rows(), value(a).cols());
    g.middleCols(start, n) = nodes_[out.id].grad;
    accumulate(a, g);
  };
  return out;
}

Tape::Var Tape::row(Var a, Eigen::Index r) {
  Var out = push(value(a).row(r), needs(a));
  nodes_[out.id].backprop = [this, a, r, out] {
    Matrix g = Matrix::Zero(value(a).rows(), value(a).cols());
    g.row(r) = nodes_[out.id].grad;
    accumulate(a, g);
  };
  return out;
}

Tape::Var Tape::concat_cols(const std::vector<Var>& parts) {
  Eigen::Index rows = value(parts.front()).rows();
  Eigen::Index total = 0;
  bool any = false;
  for (Var p : parts) {
    total += value(p).cols();
    any = any || needs(p);
  }
  Matrix v(rows, total);
  Eigen::Index at = 0;
  for (Var p : parts) {
    v.middleCols(at, value(p).cols()) = value(p);
    at += value(p).cols();
  }
  Var out = push(std::move(v), any);
  nodes_[out.id].backprop = [this, parts, out] {
    const Matrix& g = nodes_[out.id].grad;
    Eigen::Index at = 0;
    for (Var p : parts) {
      const Eigen::Index c = value(p).cols();
      if (needs(p)) accumulate(p, g.middleCols(at, c));
      at += c;
    }
  };
  return out;
}

Tape::Var Tape::bce_with_logits(Var logit, double target) {
  const double z = value(logit)(0, 0);
  const double loss =
      std::max(z, 0.0) - z * target + std::log1p(std::exp(-std::abs(z)));
  Var out = push(Matrix::Constant(1, 1, loss), needs(logit));
  nodes_[out.id].backprop = [this, logit, target, z, out] {
    accumulate(logit, Matrix::Constant(1, 1, (nn::sigmoid(z) - target) *
                                                 nodes_[out.id].grad(0, 0)));
  };
  return out;
}

void Tape::backward(Var loss) {
  if (value(loss).size() != 1) {
    throw std::invalid_argument("backward() needs a scalar node");
  }
  if (!needs(loss)) return;
  nodes_[loss.id].grad = Matrix::Ones(1, 1);
  for (std::size_t i = loss.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.size() == 0 || !n.backprop) continue;
    n.backprop();
  }
}

}  // namespace aquasift::nn
