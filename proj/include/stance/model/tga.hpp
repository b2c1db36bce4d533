#pragma once

// Topic-grouped attention head.
//
//   q     = W_a r_dt
//   s     = softmax_i(lambda * t_i . q),  lambda = 1/sqrt(E)
//   c_dt  = sum_i s_i t_i
//   d~    = mean_i d_i
//   p     = softmax(W_2 tanh(W_1 [d~; c_dt] + b_1) + b_2)
//
// Token embeddings and r_dt are frozen inputs; only W_a and the classifier
// receive gradients.

#include <cstdint>
#include <filesystem>

#include <Eigen/Dense>

#include "stance/model/mlp.hpp"

namespace stance::model {

struct TgaParams {
  Eigen::MatrixXd w_a;  // E x 2E
  MlpParams head;       // input 2E
  double lambda = 1.0;

  Eigen::Index dim() const { return w_a.rows(); }
  Eigen::Index hidden() const { return head.hidden(); }
  Eigen::Index size() const { return w_a.size() + head.size(); }

  static TgaParams zeros(Eigen::Index dim, Eigen::Index hidden);
  static TgaParams init(Eigen::Index dim, Eigen::Index hidden, std::uint64_t seed);

  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
};

struct ForwardCache {
  Eigen::VectorXd q;        // W_a r_dt
  Eigen::VectorXd s;        // attention weights, m
  Eigen::VectorXd c_dt;     // E
  Eigen::VectorXd d_tilde;  // E
  MlpCache head;
  Eigen::Vector3d p;
};

/// Gradients share TgaParams' shape; lambda is unused.
using TgaGrads = TgaParams;

/// topic: m x E token embeddings, doc: n x E, r_dt: 2E.
Eigen::Vector3d tga_forward(const Eigen::MatrixXd& topic, const Eigen::MatrixXd& doc,
                            const Eigen::VectorXd& r_dt, const TgaParams& params,
                            ForwardCache& cache);

/// Same as tga_forward with the document already mean-pooled.
Eigen::Vector3d tga_forward_pooled(const Eigen::MatrixXd& topic, const Eigen::VectorXd& d_tilde,
                                   const Eigen::VectorXd& r_dt, const TgaParams& params,
                                   ForwardCache& cache);

/// Adds the cross-entropy gradient for one example into `grads`.
void tga_backward_into(const ForwardCache& cache, const Eigen::MatrixXd& topic,
                       const Eigen::VectorXd& r_dt, const TgaParams& params, StanceLabel label,
                       TgaGrads& grads);

TgaGrads tga_backward(const ForwardCache& cache, const Eigen::MatrixXd& topic,
                      const Eigen::MatrixXd& doc, const Eigen::VectorXd& r_dt,
                      const TgaParams& params, StanceLabel label);

/// "TGAP", u32 version, u32 E, u32 h, then W_a, W_1, b_1, W_2, b_2 as
/// little-endian f32 in row-major order.
void write_params(const TgaParams& params, const std::filesystem::path& path);
TgaParams read_params(const std::filesystem::path& path);

}  // namespace stance::model
