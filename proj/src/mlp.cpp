#include "stance/model/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "stance/error.hpp"

namespace stance::model {

MlpParams MlpParams::zeros(Eigen::Index input_dim, Eigen::Index hidden) {
  MlpParams p;
  p.w1 = Eigen::MatrixXd::Zero(hidden, input_dim);
  p.b1 = Eigen::VectorXd::Zero(hidden);
  p.w2 = Eigen::MatrixXd::Zero(kNumLabels, hidden);
  p.b2 = Eigen::VectorXd::Zero(kNumLabels);
  return p;
}

MlpParams MlpParams::init(Eigen::Index input_dim, Eigen::Index hidden, rng::Rng& rng) {
  MlpParams p = zeros(input_dim, hidden);
  p.w1 = glorot_uniform(hidden, input_dim, rng);
  p.w2 = glorot_uniform(kNumLabels, hidden, rng);
  return p;
}

void MlpParams::pack(Eigen::VectorXd& flat, Eigen::Index offset) const {
  flat.segment(offset, w1.size()) = w1.reshaped();
  offset += w1.size();
  flat.segment(offset, b1.size()) = b1;
  offset += b1.size();
  flat.segment(offset, w2.size()) = w2.reshaped();
  offset += w2.size();
  flat.segment(offset, b2.size()) = b2;
}

void MlpParams::unpack(const Eigen::VectorXd& flat, Eigen::Index offset) {
  w1.reshaped() = flat.segment(offset, w1.size());
  offset += w1.size();
  b1 = flat.segment(offset, b1.size());
  offset += b1.size();
  w2.reshaped() = flat.segment(offset, w2.size());
  offset += w2.size();
  b2 = flat.segment(offset, b2.size());
}

Eigen::VectorXd softmax(const Eigen::VectorXd& z) {
  Eigen::VectorXd e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

Eigen::MatrixXd glorot_uniform(Eigen::Index rows, Eigen::Index cols, rng::Rng& rng) {
  const double a = std::sqrt(6.0 / double(rows + cols));
  Eigen::MatrixXd m(rows, cols);
  // Row-major fill order keeps initialization independent of storage order.
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(-a, a);
  return m;
}

Eigen::Vector3d mlp_forward(const MlpParams& params, const Eigen::VectorXd& x, MlpCache* cache) {
  if (x.size() != params.input_dim())
    throw Error(ErrorCode::DimMismatch, "classifier input has dim " + std::to_string(x.size()) +
                                            ", expected " + std::to_string(params.input_dim()));
  Eigen::VectorXd hidden = (params.w1 * x + params.b1).array().tanh().matrix();
  Eigen::Vector3d logits = params.w2 * hidden + params.b2;
  Eigen::Vector3d p = softmax(logits);
  if (cache) {
    cache->x = x;
    cache->hidden = std::move(hidden);
    cache->logits = logits;
    cache->p = p;
  }
  return p;
}

Eigen::VectorXd mlp_backward(const MlpParams& params, const MlpCache& cache, StanceLabel label,
                             MlpParams& grads) {
  if (cache.x.size() != params.input_dim() || cache.hidden.size() != params.hidden())
    throw Error(ErrorCode::StaleCache, "cache shape does not match parameters");
  Eigen::Vector3d g_logits = cache.p;
  g_logits[label_index(label)] -= 1.0;
  grads.w2.noalias() += g_logits * cache.hidden.transpose();
  grads.b2 += g_logits;
  Eigen::VectorXd g_hidden = params.w2.transpose() * g_logits;
  Eigen::VectorXd g_pre = g_hidden.array() * (1.0 - cache.hidden.array().square());
  grads.w1.noalias() += g_pre * cache.x.transpose();
  grads.b1 += g_pre;
  return params.w1.transpose() * g_pre;
}

double cross_entropy(const Eigen::VectorXd& p, int label) {
  if (label < 0 || label >= p.size()) throw Error(ErrorCode::BadLabel, "label " + std::to_string(label));
  return -std::log(std::max(p[label], 1e-12));
}

double cross_entropy(const Eigen::VectorXd& p, StanceLabel label) {
  return cross_entropy(p, label_index(label));
}

StanceLabel argmax_label(const Eigen::Vector3d& p) {
  int best = 0;
  for (int i = 1; i < kNumLabels; ++i)
    if (p[i] > p[best]) best = i;
  return static_cast<StanceLabel>(best);
}

}  // namespace stance::model
