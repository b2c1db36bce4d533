#pragma once

// Reference implementations used only by tests. Each one recomputes a
// quantity the slow, direct way so the library's optimized path can be
// checked against it.

#include <Eigen/Dense>

#include <filesystem>
#include <functional>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/gtr.hpp"
#include "stance/model/tga.hpp"

namespace stance::testing {

// --- Ward ------------------------------------------------------------------------

/// Greedy Ward merging that evaluates every candidate merge as
/// SSE(A u B) - SSE(A) - SSE(B) from the raw points. Clusters are named by
/// their lowest point index; ties go to the lexicographically smallest pair.
std::vector<gtr::Merge> brute_ward(const Eigen::MatrixXd& points);

/// Partition after applying the first n - k merges, as sorted member lists.
std::vector<std::vector<std::size_t>> brute_partition(std::size_t n, const std::vector<gtr::Merge>& merges,
                                                      std::size_t k);
double brute_sse(const Eigen::MatrixXd& points, const std::vector<std::vector<std::size_t>>& clusters);

// --- TGA -------------------------------------------------------------------------

struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;  // row-major
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
};

struct StraightLine {
  std::vector<double> q, scores, s, c, d_tilde, x, pre, hidden, logits, p;
};

/// Evaluates the attention and classifier equations with explicit loops.
StraightLine straight_line_tga(const Matrix& topic, const Matrix& doc, const std::vector<double>& r,
                               const Matrix& w_a, const Matrix& w1, const std::vector<double>& b1,
                               const Matrix& w2, const std::vector<double>& b2, double lambda);

Matrix to_plain(const Eigen::MatrixXd& m);
std::vector<double> to_plain(const Eigen::VectorXd& v);

struct TgaFixture {
  model::TgaParams params;
  Eigen::MatrixXd topic;
  Eigen::MatrixXd doc;
  Eigen::VectorXd r_dt;
};

/// Reads the checked-in text fixture (named blocks of row-major numbers).
TgaFixture load_tga_fixture(const std::filesystem::path& path);

// --- gradients -------------------------------------------------------------------

/// Central differences of f at x with the given step.
Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                 const Eigen::VectorXd& x, double step = 1e-5);

/// Largest coordinate-wise |a - b| / max(|a|, |b|, floor).
double max_relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double floor);

// --- scoring ---------------------------------------------------------------------

/// Macro-F1 from per-label counts over explicit filtering loops.
double oracle_macro_f1(const std::vector<StanceLabel>& gold, const std::vector<StanceLabel>& pred);

}  // namespace stance::testing
