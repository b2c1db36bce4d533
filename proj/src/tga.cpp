#include "stance/model/tga.hpp"

#include <cmath>
#include <fstream>

#include "stance/binary_io.hpp"
#include "stance/error.hpp"

namespace stance::model {

TgaParams TgaParams::zeros(Eigen::Index dim, Eigen::Index hidden) {
  TgaParams p;
  p.w_a = Eigen::MatrixXd::Zero(dim, 2 * dim);
  p.head = MlpParams::zeros(2 * dim, hidden);
  p.lambda = 1.0 / std::sqrt(double(dim));
  return p;
}

TgaParams TgaParams::init(Eigen::Index dim, Eigen::Index hidden, std::uint64_t seed) {
  rng::Rng rng(seed);
  TgaParams p = zeros(dim, hidden);
  p.w_a = glorot_uniform(dim, 2 * dim, rng);
  p.head = MlpParams::init(2 * dim, hidden, rng);
  return p;
}

Eigen::VectorXd TgaParams::flatten() const {
  Eigen::VectorXd flat(size());
  flat.head(w_a.size()) = w_a.reshaped();
  head.pack(flat, w_a.size());
  return flat;
}

void TgaParams::assign(const Eigen::VectorXd& flat) {
  if (flat.size() != size()) throw Error(ErrorCode::ShapeMismatch, "flat parameter size mismatch");
  w_a.reshaped() = flat.head(w_a.size());
  head.unpack(flat, w_a.size());
}

Eigen::Vector3d tga_forward_pooled(const Eigen::MatrixXd& topic, const Eigen::VectorXd& d_tilde,
                                   const Eigen::VectorXd& r_dt, const TgaParams& params,
                                   ForwardCache& cache) {
  const Eigen::Index e = params.dim();
  if (topic.rows() == 0) throw Error(ErrorCode::EmptyTopic, "topic has no token embeddings");
  if (topic.cols() != e || d_tilde.size() != e || r_dt.size() != 2 * e)
    throw Error(ErrorCode::DimMismatch, "inputs do not match embedding dim " + std::to_string(e));

  cache.q = params.w_a * r_dt;
  cache.s = softmax(params.lambda * (topic * cache.q));
  cache.c_dt = topic.transpose() * cache.s;
  cache.d_tilde = d_tilde;
  Eigen::VectorXd x(2 * e);
  x << d_tilde, cache.c_dt;
  cache.p = mlp_forward(params.head, x, &cache.head);
  return cache.p;
}

Eigen::Vector3d tga_forward(const Eigen::MatrixXd& topic, const Eigen::MatrixXd& doc,
                            const Eigen::VectorXd& r_dt, const TgaParams& params,
                            ForwardCache& cache) {
  if (doc.rows() == 0) throw Error(ErrorCode::EmptyDocument, "document has no token embeddings");
  if (doc.cols() != params.dim())
    throw Error(ErrorCode::DimMismatch, "document dim does not match parameters");
  return tga_forward_pooled(topic, doc.colwise().mean().transpose(), r_dt, params, cache);
}

void tga_backward_into(const ForwardCache& cache, const Eigen::MatrixXd& topic,
                       const Eigen::VectorXd& r_dt, const TgaParams& params, StanceLabel label,
                       TgaGrads& grads) {
  const Eigen::Index e = params.dim();
  if (cache.s.size() != topic.rows() || cache.q.size() != e || cache.c_dt.size() != e ||
      topic.cols() != e || r_dt.size() != 2 * e || grads.w_a.rows() != e ||
      grads.w_a.cols() != 2 * e)
    throw Error(ErrorCode::StaleCache, "forward cache does not match these inputs");

  Eigen::VectorXd g_x = mlp_backward(params.head, cache.head, label, grads.head);
  Eigen::VectorXd g_c = g_x.tail(e);
  // c = T^T s  ->  dL/ds_i = t_i . g_c; softmax Jacobian; score_i = lambda t_i . q
  Eigen::VectorXd g_s = topic * g_c;
  Eigen::VectorXd g_score = cache.s.array() * (g_s.array() - cache.s.dot(g_s));
  Eigen::VectorXd g_q = params.lambda * (topic.transpose() * g_score);
  grads.w_a.noalias() += g_q * r_dt.transpose();
}

TgaGrads tga_backward(const ForwardCache& cache, const Eigen::MatrixXd& topic,
                      const Eigen::MatrixXd& doc, const Eigen::VectorXd& r_dt,
                      const TgaParams& params, StanceLabel label) {
  if (doc.cols() != params.dim() || doc.rows() == 0)
    throw Error(ErrorCode::StaleCache, "document does not match the forward cache");
  TgaGrads grads = TgaParams::zeros(params.dim(), params.hidden());
  tga_backward_into(cache, topic, r_dt, params, label, grads);
  return grads;
}

namespace {

constexpr char kMagic[4] = {'T', 'G', 'A', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) io::put_f32(out, static_cast<float>(m(r, c)));
}

void get_matrix(io::Reader& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = in.f32();
}

void get_vector(io::Reader& in, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = in.f32();
}

}  // namespace

void write_params(const TgaParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(kMagic, 4);
  io::put_u32(out, kVersion);
  io::put_u32(out, static_cast<std::uint32_t>(params.dim()));
  io::put_u32(out, static_cast<std::uint32_t>(params.hidden()));
  put_matrix(out, params.w_a);
  put_matrix(out, params.head.w1);
  put_matrix(out, params.head.b1);
  put_matrix(out, params.head.w2);
  put_matrix(out, params.head.b2);
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

TgaParams read_params(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot open " + path.string());
  io::Reader in(file, path.string());
  char magic[4] = {};
  in.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw Error(ErrorCode::BadMagic, path.string());
  if (std::uint32_t v = in.u32(); v != kVersion)
    throw Error(ErrorCode::VersionMismatch, path.string() + ": version " + std::to_string(v));
  std::uint32_t e = in.u32(), h = in.u32();
  if (e == 0 || h == 0) throw Error(ErrorCode::DimMismatch, path.string() + ": zero dimension");
  TgaParams p = TgaParams::zeros(e, h);
  get_matrix(in, p.w_a);
  get_matrix(in, p.head.w1);
  get_vector(in, p.head.b1);
  get_matrix(in, p.head.w2);
  get_vector(in, p.head.b2);
  return p;
}

}  // namespace stance::model
