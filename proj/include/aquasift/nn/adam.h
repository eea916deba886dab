#ifndef AQUASIFT_NN_ADAM_H_
#define AQUASIFT_NN_ADAM_H_

#include <vector>

#include "aquasift/nn/tape.h"

namespace aquasift::nn {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Adaptive-moment optimizer with bias-corrected first and second moments.
// Parameters with trainable == false are skipped.
class Adam {
 public:
  Adam(ParameterSet& params, AdamOptions options);

  // Applies one update using grad * grad_scale, then zeroes all gradients.
  void step(double grad_scale = 1.0);

  long steps() const { return t_; }

 private:
  ParameterSet& params_;
  AdamOptions options_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  long t_ = 0;
};

}  // namespace aquasift::nn

#endif  // AQUASIFT_NN_ADAM_H_
