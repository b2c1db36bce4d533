#include "stance/gtr.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include "stance/binary_io.hpp"
#include "stance/embed.hpp"
#include "stance/error.hpp"
#include "stance/rng.hpp"

namespace stance::gtr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (cost, a, b) ordering used for every merge decision.
bool better(double cost, std::size_t a, std::size_t b, double best_cost, std::size_t best_a,
            std::size_t best_b) {
  if (cost != best_cost) return cost < best_cost;
  if (a != best_a) return a < best_a;
  return b < best_b;
}

}  // namespace

std::vector<Merge> ward_linkage(const Eigen::MatrixXd& points) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  std::vector<Merge> merges;
  if (n < 2) return merges;
  merges.reserve(n - 1);

  // dist(i, j) holds the Ward merge cost n_i n_j / (n_i + n_j) |c_i - c_j|^2,
  // which starts at |x_i - x_j|^2 / 2 and follows the Lance-Williams update.
  std::vector<double> dist(n * n, 0.0);
  auto d = [&](std::size_t i, std::size_t j) -> double& { return dist[i * n + j]; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (points.row(static_cast<Eigen::Index>(i)) -
                        points.row(static_cast<Eigen::Index>(j)))
                           .squaredNorm();
      d(i, j) = v;
      d(j, i) = v;
    }

  std::vector<double> size(n, 1.0);
  std::vector<char> active(n, 1);
  std::vector<std::size_t> nn(n, n);
  std::vector<double> nn_cost(n, kInf);

  auto refresh = [&](std::size_t i) {
    nn[i] = n;
    nn_cost[i] = kInf;
    for (std::size_t j = i + 1; j < n; ++j)
      if (active[j] && (nn[i] == n || d(i, j) < nn_cost[i])) {
        nn[i] = j;
        nn_cost[i] = d(i, j);
      }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = n, b = n;
    double best = kInf;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && nn[i] != n && (a == n || better(nn_cost[i], i, nn[i], best, a, b))) {
        a = i;
        b = nn[i];
        best = nn_cost[i];
      }
    merges.push_back(Merge{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b), best});

    const double na = size[a], nb = size[b];
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double nk = size[k];
      double v = ((na + nk) * d(a, k) + (nb + nk) * d(b, k) - nk * best) / (na + nb + nk);
      d(a, k) = v;
      d(k, a) = v;
    }
    size[a] = na + nb;
    active[b] = 0;

    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (i == a || nn[i] == a || nn[i] == b) {
        refresh(i);
      } else if (i < a && better(d(i, a), i, a, nn_cost[i], i, nn[i])) {
        nn[i] = a;
        nn_cost[i] = d(i, a);
      }
    }
  }
  return merges;
}

std::vector<std::uint32_t> cut_tree(std::size_t n_points, const std::vector<Merge>& merges,
                                    std::size_t k) {
  if (k < 1 || k > n_points)
    throw Error(ErrorCode::BadK, "k=" + std::to_string(k) + " with " + std::to_string(n_points) +
                                     " points");
  // Union by slot: after each merge, members of b point at a.
  std::vector<std::size_t> parent(n_points);
  for (std::size_t i = 0; i < n_points; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t m = 0; m < n_points - k; ++m) parent[find(merges[m].cluster_b)] = find(merges[m].cluster_a);

  std::vector<std::uint32_t> membership(n_points);
  std::map<std::size_t, std::uint32_t> label;
  for (std::size_t i = 0; i < n_points; ++i) {
    auto [it, inserted] = label.try_emplace(find(i), static_cast<std::uint32_t>(label.size()));
    membership[i] = it->second;
  }
  return membership;
}

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points,
                              const std::vector<std::uint32_t>& membership, std::size_t k) {
  Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), points.cols());
  std::vector<double> counts(k, 0.0);
  for (std::size_t i = 0; i < membership.size(); ++i) {
    sums.row(membership[i]) += points.row(static_cast<Eigen::Index>(i));
    counts[membership[i]] += 1.0;
  }
  for (std::size_t c = 0; c < k; ++c)
    if (counts[c] > 0) sums.row(static_cast<Eigen::Index>(c)) /= counts[c];
  return sums;
}

double within_sse(const Eigen::MatrixXd& points, const std::vector<std::uint32_t>& membership,
                  const Eigen::MatrixXd& centroids) {
  double sse = 0.0;
  for (std::size_t i = 0; i < membership.size(); ++i)
    sse += (points.row(static_cast<Eigen::Index>(i)) - centroids.row(membership[i])).squaredNorm();
  return sse;
}

ClusterModel ward_cluster(const Eigen::MatrixXd& points, const std::vector<std::string>& ids,
                          std::size_t k) {
  const std::size_t n = static_cast<std::size_t>(points.rows());
  if (ids.size() != n) throw Error(ErrorCode::InvalidArgument, "one id per point required");
  if (k < 1 || k > n)
    throw Error(ErrorCode::BadK, "k=" + std::to_string(k) + " with " + std::to_string(n) + " points");
  std::vector<Merge> merges = ward_linkage(points);
  merges.resize(n - k);
  auto membership = cut_tree(n, merges, k);

  ClusterModel model;
  model.k = static_cast<std::uint32_t>(k);
  model.centroids = cluster_means(points, membership, k);
  for (std::size_t i = 0; i < n; ++i) model.assignments[ids[i]] = membership[i];
  model.merge_log = std::move(merges);
  return model;
}

Assignment assign_r(const Eigen::VectorXd& v_dt, const ClusterModel& model) {
  if (v_dt.size() != model.centroids.cols())
    throw Error(ErrorCode::DimMismatch, "query dim " + std::to_string(v_dt.size()) +
                                            " vs centroid dim " + std::to_string(model.centroids.cols()));
  if (model.centroids.rows() == 0) throw Error(ErrorCode::BadK, "cluster model has no centroids");
  Eigen::Index best = 0;
  double best_d = kInf;
  for (Eigen::Index c = 0; c < model.centroids.rows(); ++c) {
    double dd = (model.centroids.row(c).transpose() - v_dt).squaredNorm();
    if (dd < best_d) {
      best_d = dd;
      best = c;
    }
  }
  return Assignment{static_cast<std::uint32_t>(best), model.centroids.row(best).transpose()};
}

KSelection select_k(const Eigen::MatrixXd& train_points, const Eigen::MatrixXd& dev_points,
                    std::size_t trials, std::size_t lo, std::size_t hi, std::uint64_t rng_seed) {
  const std::size_t n = static_cast<std::size_t>(train_points.rows());
  if (trials < 1 || lo < 1 || lo > hi || hi > n)
    throw Error(ErrorCode::BadRange, "k range [" + std::to_string(lo) + "," + std::to_string(hi) +
                                         "] with " + std::to_string(n) + " training points");
  if (dev_points.rows() > 0 && dev_points.cols() != train_points.cols())
    throw Error(ErrorCode::DimMismatch, "dev and train points differ in dimension");

  rng::Rng rng(rng_seed);
  std::set<std::size_t> ks;
  for (std::size_t t = 0; t < trials; ++t)
    ks.insert(static_cast<std::size_t>(rng.range(static_cast<long long>(lo), static_cast<long long>(hi))));

  // Ward merging is greedy, so every k is a prefix of one full linkage.
  std::vector<Merge> merges = ward_linkage(train_points);
  KSelection result;
  double best = kInf;
  for (std::size_t k : ks) {
    auto membership = cut_tree(n, merges, k);
    ClusterModel model;
    model.k = static_cast<std::uint32_t>(k);
    model.centroids = cluster_means(train_points, membership, k);
    KTrial trial;
    trial.k = k;
    trial.train_sse = within_sse(train_points, membership, model.centroids);
    for (Eigen::Index i = 0; i < dev_points.rows(); ++i) {
      Eigen::VectorXd q = dev_points.row(i).transpose();
      trial.dev_ssd += (assign_r(q, model).centroid - q).squaredNorm();
    }
    if (trial.dev_ssd < best) {
      best = trial.dev_ssd;
      result.best_k = k;
    }
    result.trials.push_back(trial);
  }
  return result;
}

std::string point_id(const StanceExample& ex) { return ex.doc_id + "\t" + topic_key(ex.topic_tokens); }

std::vector<ClusterStat> cluster_stats(std::size_t k, const std::vector<StanceExample>& examples,
                                       const std::vector<std::uint32_t>& clusters) {
  if (clusters.size() != examples.size())
    throw Error(ErrorCode::UnassignedExample, "one cluster index per example required");
  std::vector<ClusterStat> stats(k);
  std::vector<std::set<std::string>> topics(k);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    std::uint32_t c = clusters[i];
    if (c >= k) throw Error(ErrorCode::UnassignedExample, "cluster index out of range");
    stats[c].cluster = c;
    ++stats[c].size;
    ++stats[c].labels[label_index(examples[i].label)];
    topics[c].insert(topic_key(examples[i].topic_tokens));
  }
  std::vector<ClusterStat> out;
  for (std::size_t c = 0; c < k; ++c) {
    if (stats[c].size == 0) continue;
    stats[c].unique_topics = topics[c].size();
    out.push_back(stats[c]);
  }
  return out;
}

std::vector<ClusterStat> cluster_stats(const ClusterModel& model,
                                       const std::vector<StanceExample>& examples) {
  std::vector<std::uint32_t> clusters;
  clusters.reserve(examples.size());
  for (const auto& ex : examples) {
    auto it = model.assignments.find(point_id(ex));
    if (it == model.assignments.end())
      throw Error(ErrorCode::UnassignedExample, "example " + ex.example_id + " has no cluster");
    clusters.push_back(it->second);
  }
  return cluster_stats(model.k, examples, clusters);
}

// Layout: u32 k, u32 dim, k*dim f32 centroids, u32 n_assign then (key, u32)
// pairs, u32 n_merges then (u32, u32, f64) triples.
void write_model(const ClusterModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  io::put_u32(out, model.k);
  io::put_u32(out, static_cast<std::uint32_t>(model.centroids.cols()));
  for (Eigen::Index r = 0; r < model.centroids.rows(); ++r)
    for (Eigen::Index c = 0; c < model.centroids.cols(); ++c)
      io::put_f32(out, static_cast<float>(model.centroids(r, c)));
  io::put_u32(out, static_cast<std::uint32_t>(model.assignments.size()));
  for (const auto& [key, c] : model.assignments) {
    io::put_string(out, key);
    io::put_u32(out, c);
  }
  io::put_u32(out, static_cast<std::uint32_t>(model.merge_log.size()));
  for (const auto& m : model.merge_log) {
    io::put_u32(out, m.cluster_a);
    io::put_u32(out, m.cluster_b);
    io::put_f64(out, m.cost);
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

ClusterModel read_model(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot open " + path.string());
  io::Reader in(file, path.string());
  ClusterModel model;
  model.k = in.u32();
  std::uint32_t dim = in.u32();
  if (model.k == 0 || dim == 0) throw Error(ErrorCode::BadK, path.string() + ": empty cluster model");
  model.centroids.resize(model.k, dim);
  for (std::uint32_t r = 0; r < model.k; ++r)
    for (std::uint32_t c = 0; c < dim; ++c) model.centroids(r, c) = in.f32();
  std::uint32_t n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string key = in.string();
    std::uint32_t c = in.u32();
    if (c >= model.k) throw Error(ErrorCode::BadK, path.string() + ": assignment out of range");
    model.assignments[key] = c;
  }
  std::uint32_t m = in.u32();
  for (std::uint32_t i = 0; i < m; ++i) {
    Merge mg;
    mg.cluster_a = in.u32();
    mg.cluster_b = in.u32();
    mg.cost = in.f64();
    model.merge_log.push_back(mg);
  }
  return model;
}

}  // namespace stance::gtr
