#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "netda/community.hpp"
#include "netda/graph.hpp"

namespace netda::assim {

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<double> a;  // row-major

  static Matrix zero(int r, int c) {
    return {r, c, std::vector<double>(static_cast<std::size_t>(r) *
                                          static_cast<std::size_t>(c),
                                      0.0)};
  }
  static Matrix identity(int n) {
    Matrix m = zero(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
  double& at(int r, int c) {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(c)];
  }
  double at(int r, int c) const {
    return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
             static_cast<std::size_t>(c)];
  }
};

struct CovarianceFactor;  // Cholesky cache, defined in assimilation.cpp

// Symmetric positive-definite error covariance, diagonal or dense. Dense
// covariances are factorized (and condition-checked) at construction, so
// instances are immutable and safe to share across threads.
class Covariance {
 public:
  static Covariance scaled_identity(int dim, double scale);
  static Covariance diagonal(std::vector<double> d);
  static Covariance dense(Matrix m);

  bool is_diagonal() const { return diagonal_; }
  int dim() const { return dim_; }
  const std::vector<double>& diag() const;
  const Matrix& dense_matrix() const;

  void apply(std::span<const double> x, std::span<double> y) const;
  void apply_inverse(std::span<const double> x, std::span<double> y) const;
  // d^T C^{-1} d
  double quadratic_inverse(std::span<const double> d) const;

 private:
  bool diagonal_ = true;
  int dim_ = 0;
  std::vector<double> diag_;
  Matrix dense_;
  std::shared_ptr<const CovarianceFactor> factor_;
};

// Linear observation operator H: dense, sub-identity (a selection of state
// coordinates), or square diagonal.
class ObservationOperator {
 public:
  enum class Kind { dense, sub_identity, diagonal };

  static ObservationOperator dense(Matrix h);
  static ObservationOperator sub_identity(std::vector<int> selected,
                                          int state_dim);
  static ObservationOperator diagonal(std::vector<double> entries);

  Kind kind() const { return kind_; }
  int state_dim() const { return state_dim_; }
  int obs_dim() const { return obs_dim_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  void apply_transpose(std::span<const double> y, std::span<double> x) const;
  Matrix to_dense() const;

  const std::vector<int>& selection() const { return selected_; }
  const std::vector<double>& diagonal_entries() const { return diag_; }
  const Matrix& dense_matrix() const { return dense_; }

 private:
  Kind kind_ = Kind::dense;
  int state_dim_ = 0, obs_dim_ = 0;
  std::vector<int> selected_;
  std::vector<double> diag_;
  Matrix dense_;
};

struct AssimilationProblem {
  std::vector<double> background;   // x^b, dim m
  std::vector<double> observation;  // y, dim d
  ObservationOperator op;
  Covariance cov_background;
  Covariance cov_observation;

  void validate() const;
};

struct AssimilationResult {
  std::vector<double> analysis;
  std::optional<Matrix> analysis_cov;
  double innovation_norm = 0.0;
  int iterations = 0;
};

// K = B H^T (H B H^T + O)^{-1}, materialized densely; the innovation matrix
// is solved via Cholesky with a condition-number guard at 1e12 (never an
// explicit inverse). Intended for modest dimensions; large sparse cases go
// through blue_update's structured paths.
Matrix kalman_gain(const Covariance& b, const ObservationOperator& h,
                   const Covariance& o);

// x^a = x^b + K (y - H x^b); analysis covariance (I - K H) B on request.
// Sub-identity and diagonal H with diagonal covariances take closed-form
// paths that never build a matrix.
AssimilationResult blue_update(const AssimilationProblem& p,
                               bool with_cov = false);

// J(x) = 1/2 |x - x^b|^2_{B^-1} + 1/2 |y - Hx|^2_{O^-1} and its gradient.
std::pair<double, std::vector<double>> cost_3dvar(
    std::span<const double> x, const AssimilationProblem& p);

// Quasi-Newton (L-BFGS) descent on the 3D-VAR cost until the gradient
// infinity-norm drops below tol. Throws convergence_error carrying the best
// iterate when max_iter is exhausted.
AssimilationResult minimize_3dvar(const AssimilationProblem& p, double tol,
                                  int max_iter);

// Network-state assimilation for partially observed contact graphs: the
// state is the vectorized upper-triangular adjacency over the sparse
// support, observations are intra-community edge weights, H is the
// sub-identity onto the observed coordinates, and B / O are scaled
// identities. With equal scales the analysis is (background+observed)/2 on
// observed coordinates and background elsewhere. The gain is precomputed
// once per configuration and reused at every step.
class NetworkAssimilator {
 public:
  NetworkAssimilator(Partition partition, double b_scale, double o_scale);

  Graph assimilate(const Graph& background,
                   const std::vector<Edge>& observed) const;

  double gain() const { return gain_; }
  int gain_computations() const { return gain_computations_; }
  const Partition& partition() const { return partition_; }

 private:
  Partition partition_;
  double gain_ = 0.0;
  int gain_computations_ = 0;
};

Graph assimilate_network(const Graph& background,
                         const std::vector<Edge>& observed,
                         const Partition& partition, double b_scale,
                         double o_scale);

}  // namespace netda::assim
