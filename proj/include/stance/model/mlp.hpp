#pragma once

// Two-layer tanh classifier over three stance labels:
//   p = softmax(W2 tanh(W1 x + b1) + b2)

#include <Eigen/Dense>

#include "stance/corpus.hpp"
#include "stance/rng.hpp"

namespace stance::model {

struct MlpParams {
  Eigen::MatrixXd w1;  // h x in
  Eigen::VectorXd b1;  // h
  Eigen::MatrixXd w2;  // 3 x h
  Eigen::VectorXd b2;  // 3

  Eigen::Index input_dim() const { return w1.cols(); }
  Eigen::Index hidden() const { return w1.rows(); }
  Eigen::Index size() const { return w1.size() + b1.size() + w2.size() + b2.size(); }

  /// Zero-valued parameters with the given shape (also used as gradient storage).
  static MlpParams zeros(Eigen::Index input_dim, Eigen::Index hidden);
  /// Glorot-uniform weights, zero biases.
  static MlpParams init(Eigen::Index input_dim, Eigen::Index hidden, rng::Rng& rng);

  /// Packs into flat[offset, offset + size()).
  void pack(Eigen::VectorXd& flat, Eigen::Index offset) const;
  void unpack(const Eigen::VectorXd& flat, Eigen::Index offset);
};

struct MlpCache {
  Eigen::VectorXd x;
  Eigen::VectorXd hidden;  // tanh activations
  Eigen::Vector3d logits;
  Eigen::Vector3d p;
};

Eigen::VectorXd softmax(const Eigen::VectorXd& z);

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
Eigen::MatrixXd glorot_uniform(Eigen::Index rows, Eigen::Index cols, rng::Rng& rng);

Eigen::Vector3d mlp_forward(const MlpParams& params, const Eigen::VectorXd& x, MlpCache* cache = nullptr);

/// Adds d(-ln p[label]) / d(params) into `grads` and returns the gradient with
/// respect to the input x.
Eigen::VectorXd mlp_backward(const MlpParams& params, const MlpCache& cache, StanceLabel label,
                             MlpParams& grads);

/// -ln max(p[label], 1e-12)
double cross_entropy(const Eigen::VectorXd& p, StanceLabel label);
double cross_entropy(const Eigen::VectorXd& p, int label);

/// Argmax with ties to the lowest label index.
StanceLabel argmax_label(const Eigen::Vector3d& p);

}  // namespace stance::model
