#pragma once

// Generalized topic representations: Ward agglomerative clustering of
// [v_d; v_t] vectors and nearest-centroid lookup.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "stance/corpus.hpp"

namespace stance::gtr {

struct Merge {
  std::uint32_t cluster_a = 0;  // surviving slot (smaller)
  std::uint32_t cluster_b = 0;  // absorbed slot (larger)
  double cost = 0.0;            // increase in within-cluster SSE
  bool operator==(const Merge&) const = default;
};

struct ClusterModel {
  std::uint32_t k = 0;
  Eigen::MatrixXd centroids;                         // k x dim
  std::map<std::string, std::uint32_t> assignments;  // point id -> cluster
  std::vector<Merge> merge_log;

  Eigen::Index dim() const { return centroids.cols(); }
};

/// Full agglomeration from singletons down to one cluster. Slots are the row
/// indices of `points`; a merge keeps the smaller slot. Among equal costs the
/// lexicographically smallest (slot_a, slot_b) pair merges first.
std::vector<Merge> ward_linkage(const Eigen::MatrixXd& points);

/// Cluster membership (cluster index per point) after applying the first
/// N - k merges. Clusters are numbered by their smallest member.
std::vector<std::uint32_t> cut_tree(std::size_t n_points, const std::vector<Merge>& merges,
                                    std::size_t k);

Eigen::MatrixXd cluster_means(const Eigen::MatrixXd& points,
                              const std::vector<std::uint32_t>& membership, std::size_t k);

/// Sum of squared distances of each point to its cluster mean.
double within_sse(const Eigen::MatrixXd& points, const std::vector<std::uint32_t>& membership,
                  const Eigen::MatrixXd& centroids);

ClusterModel ward_cluster(const Eigen::MatrixXd& points, const std::vector<std::string>& ids,
                          std::size_t k);

struct Assignment {
  std::uint32_t cluster = 0;
  Eigen::VectorXd centroid;  // r_dt
};

/// Nearest centroid in euclidean distance, ties to the lowest index.
Assignment assign_r(const Eigen::VectorXd& v_dt, const ClusterModel& model);

struct KTrial {
  std::size_t k = 0;
  double dev_ssd = 0.0;
  double train_sse = 0.0;
};

struct KSelection {
  std::size_t best_k = 0;
  std::vector<KTrial> trials;  // ascending k, duplicates removed
};

/// Samples `trials` values of k uniformly from [lo, hi] (with replacement),
/// clusters the training points, and scores each k by the squared distance of
/// every dev point to its nearest centroid. The lowest score wins, ties to the
/// smaller k.
KSelection select_k(const Eigen::MatrixXd& train_points, const Eigen::MatrixXd& dev_points,
                    std::size_t trials = 20, std::size_t lo = 50, std::size_t hi = 300,
                    std::uint64_t rng_seed = 0);

/// Point id used for clustering: one point per unique (doc_id, topic) pair.
std::string point_id(const StanceExample& ex);

struct ClusterStat {
  std::uint32_t cluster = 0;
  std::size_t size = 0;
  std::size_t unique_topics = 0;
  std::array<std::size_t, kNumLabels> labels{};
};

/// Statistics over examples assigned through model.assignments.
std::vector<ClusterStat> cluster_stats(const ClusterModel& model,
                                       const std::vector<StanceExample>& examples);
/// Statistics given an explicit cluster index per example.
std::vector<ClusterStat> cluster_stats(std::size_t k, const std::vector<StanceExample>& examples,
                                       const std::vector<std::uint32_t>& clusters);

void write_model(const ClusterModel& model, const std::filesystem::path& path);
ClusterModel read_model(const std::filesystem::path& path);

}  // namespace stance::gtr
