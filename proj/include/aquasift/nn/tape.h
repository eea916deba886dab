#ifndef AQUASIFT_NN_TAPE_H_
#define AQUASIFT_NN_TAPE_H_

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace aquasift::nn {

using Matrix = Eigen::MatrixXd;

// A trainable tensor and its accumulated gradient. The gradient is scratch
// space written only by Tape::backward, so forward passes over a const
// model stay read-only.
struct Parameter {
  std::string name;
  Matrix value;
  mutable Matrix grad;
  bool trainable = true;

  Parameter(std::string n, Matrix v)
      : name(std::move(n)), value(std::move(v)), grad(Matrix::Zero(value.rows(), value.cols())) {}
};

// Owns parameters in registration order; the order defines the
// serialization layout and the fingerprint.
class ParameterSet {
 public:
  Parameter& add(const std::string& name, Matrix init);

  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;

  std::size_t count() const;  // total scalar parameters
  void zero_grad();

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }
  std::size_t size() const { return params_.size(); }

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
};

// Reverse-mode automatic differentiation over dense matrices. Build the
// forward graph with the op methods, then call backward() on a 1x1 node;
// gradients land in the Parameter::grad of every parameter that was used.
// A tape is single-use and not thread-safe; use one per sample and thread.
class Tape {
 public:
  struct Var {
    std::size_t id;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);
  Var param(const Parameter& p);

  const Matrix& value(Var v) const;
  const Matrix& grad(Var v) const;

  Var matmul(Var a, Var b);     // a · b
  Var matmul_nt(Var a, Var b);  // a · bᵀ
  Var add(Var a, Var b);
  Var add_row(Var a, Var row);  // row broadcast over every row of a
  Var mul(Var a, Var b);        // elementwise
  Var scale(Var a, double s);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var gelu(Var a);  // tanh approximation
  Var softmax_rows(Var a);
  Var layer_norm_rows(Var x, Var gamma, Var beta, double eps = 1e-5);

  // Gathers rows of an embedding table; gradients scatter back into it.
  Var gather_rows(const Parameter& table, std::span<const int> ids);
  Var cols(Var a, Eigen::Index start, Eigen::Index n);
  Var row(Var a, Eigen::Index r);
  Var concat_cols(const std::vector<Var>& parts);

  // Numerically stable binary cross-entropy on a 1x1 logit.
  Var bce_with_logits(Var logit, double target);

  void backward(Var loss);

 private:
  struct Node {
    Matrix value;
    const Matrix* ref = nullptr;  // parameter value, not copied
    Matrix grad;
    bool requires_grad = false;
    std::function<void()> backprop;
  };

  Var push(Matrix value, bool requires_grad);
  bool needs(Var v) const { return nodes_[v.id].requires_grad; }
  void accumulate(Var v, const Matrix& g);

  std::vector<Node> nodes_;
};

double sigmoid(double x);

}  // namespace aquasift::nn

#endif  // AQUASIFT_NN_TAPE_H_
