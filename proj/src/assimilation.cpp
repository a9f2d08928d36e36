#include "netda/assimilation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "netda/errors.hpp"
#include "netda/kernels.hpp"

namespace netda::assim {

namespace {

constexpr double kConditionLimit = 1e12;

using EMatrix = Eigen::MatrixXd;
using EMap = Eigen::Map<EMatrix>;
using ECMap = Eigen::Map<const EMatrix>;

EMatrix to_eigen(const Matrix& m) {
  // Row-major storage mapped through a transpose.
  return ECMap(m.a.data(), m.cols, m.rows).transpose();
}

Matrix from_eigen(const EMatrix& e) {
  Matrix m = Matrix::zero(static_cast<int>(e.rows()),
                          static_cast<int>(e.cols()));
  EMap(m.a.data(), e.cols(), e.rows()) = e.transpose();
  return m;
}

void check_condition(const EMatrix& spd, const char* what) {
  Eigen::SelfAdjointEigenSolver<EMatrix> es(spd,
                                            Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > kConditionLimit)
    throw numeric_error(std::string(what) +
                        " is singular or ill-conditioned (cond > 1e12)");
}

}  // namespace

struct CovarianceFactor {
  Eigen::LLT<EMatrix> llt;
};

Covariance Covariance::scaled_identity(int dim, double scale) {
  if (dim < 0) throw config_error("covariance dimension must be >= 0");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw config_error("covariance scale must be positive and finite");
  Covariance c;
  c.diagonal_ = true;
  c.dim_ = dim;
  c.diag_.assign(static_cast<std::size_t>(dim), scale);
  return c;
}

Covariance Covariance::diagonal(std::vector<double> d) {
  for (double v : d)
    if (!(v > 0.0) || !std::isfinite(v))
      throw numeric_error("diagonal covariance entries must be positive");
  Covariance c;
  c.diagonal_ = true;
  c.dim_ = static_cast<int>(d.size());
  c.diag_ = std::move(d);
  return c;
}

Covariance Covariance::dense(Matrix m) {
  if (m.rows != m.cols) throw shape_error("dense covariance must be square");
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(m.at(i, j) - m.at(j, i)) >
          1e-12 * (1.0 + std::abs(m.at(i, j))))
        throw numeric_error("dense covariance must be symmetric");
  Covariance c;
  c.diagonal_ = false;
  c.dim_ = m.rows;
  const EMatrix e = to_eigen(m);
  check_condition(e, "covariance");
  auto factor = std::make_shared<CovarianceFactor>();
  factor->llt.compute(e);
  if (factor->llt.info() != Eigen::Success)
    throw numeric_error("covariance is not positive definite");
  c.dense_ = std::move(m);
  c.factor_ = std::move(factor);
  return c;
}

const std::vector<double>& Covariance::diag() const {
  if (!diagonal_) throw contract_violation("covariance is not diagonal");
  return diag_;
}

const Matrix& Covariance::dense_matrix() const {
  if (diagonal_) throw contract_violation("covariance is diagonal");
  return dense_;
}

void Covariance::apply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
    throw shape_error("covariance apply: dimension mismatch");
  if (diagonal_) {
    std::copy(x.begin(), x.end(), y.begin());
    kernels::mul(y, diag_);
    return;
  }
  Eigen::Map<Eigen::VectorXd>(y.data(), dim_) =
      to_eigen(dense_) * Eigen::Map<const Eigen::VectorXd>(x.data(), dim_);
}

void Covariance::apply_inverse(std::span<const double> x,
                               std::span<double> y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_)
    throw shape_error("covariance apply_inverse: dimension mismatch");
  if (diagonal_) {
    for (int i = 0; i < dim_; ++i)
      y[static_cast<std::size_t>(i)] =
          x[static_cast<std::size_t>(i)] / diag_[static_cast<std::size_t>(i)];
    return;
  }
  Eigen::Map<Eigen::VectorXd>(y.data(), dim_) = factor_->llt.solve(
      Eigen::Map<const Eigen::VectorXd>(x.data(), dim_));
}

double Covariance::quadratic_inverse(std::span<const double> d) const {
  if (diagonal_) {
    std::vector<double> inv(diag_.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) inv[i] = 1.0 / diag_[i];
    return kernels::weighted_sq_norm(d, inv);
  }
  std::vector<double> tmp(d.size());
  apply_inverse(d, tmp);
  return kernels::dot(d, tmp);
}

ObservationOperator ObservationOperator::dense(Matrix h) {
  ObservationOperator op;
  op.kind_ = Kind::dense;
  op.obs_dim_ = h.rows;
  op.state_dim_ = h.cols;
  op.dense_ = std::move(h);
  return op;
}

ObservationOperator ObservationOperator::sub_identity(
    std::vector<int> selected, int state_dim) {
  std::vector<char> seen(static_cast<std::size_t>(state_dim), 0);
  for (int i : selected) {
    if (i < 0 || i >= state_dim)
      throw shape_error("sub-identity selection index out of range");
    if (seen[static_cast<std::size_t>(i)]++)
      throw shape_error("sub-identity selection repeats coordinate " +
                        std::to_string(i));
  }
  ObservationOperator op;
  op.kind_ = Kind::sub_identity;
  op.obs_dim_ = static_cast<int>(selected.size());
  op.state_dim_ = state_dim;
  op.selected_ = std::move(selected);
  return op;
}

ObservationOperator ObservationOperator::diagonal(
    std::vector<double> entries) {
  ObservationOperator op;
  op.kind_ = Kind::diagonal;
  op.obs_dim_ = op.state_dim_ = static_cast<int>(entries.size());
  op.diag_ = std::move(entries);
  return op;
}

void ObservationOperator::apply(std::span<const double> x,
                                std::span<double> y) const {
  if (static_cast<int>(x.size()) != state_dim_ ||
      static_cast<int>(y.size()) != obs_dim_)
    throw shape_error("observation operator apply: dimension mismatch");
  switch (kind_) {
    case Kind::sub_identity:
      for (std::size_t j = 0; j < selected_.size(); ++j)
        y[j] = x[static_cast<std::size_t>(selected_[j])];
      break;
    case Kind::diagonal:
      std::copy(x.begin(), x.end(), y.begin());
      kernels::mul(y, diag_);
      break;
    case Kind::dense:
      Eigen::Map<Eigen::VectorXd>(y.data(), obs_dim_) =
          to_eigen(dense_) *
          Eigen::Map<const Eigen::VectorXd>(x.data(), state_dim_);
      break;
  }
}

void ObservationOperator::apply_transpose(std::span<const double> y,
                                          std::span<double> x) const {
  if (static_cast<int>(y.size()) != obs_dim_ ||
      static_cast<int>(x.size()) != state_dim_)
    throw shape_error("observation operator apply_transpose: dimension mismatch");
  switch (kind_) {
    case Kind::sub_identity:
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t j = 0; j < selected_.size(); ++j)
        x[static_cast<std::size_t>(selected_[j])] = y[j];
      break;
    case Kind::diagonal:
      std::copy(y.begin(), y.end(), x.begin());
      kernels::mul(x, diag_);
      break;
    case Kind::dense:
      Eigen::Map<Eigen::VectorXd>(x.data(), state_dim_) =
          to_eigen(dense_).transpose() *
          Eigen::Map<const Eigen::VectorXd>(y.data(), obs_dim_);
      break;
  }
}

Matrix ObservationOperator::to_dense() const {
  Matrix h = Matrix::zero(obs_dim_, state_dim_);
  switch (kind_) {
    case Kind::sub_identity:
      for (int j = 0; j < obs_dim_; ++j)
        h.at(j, selected_[static_cast<std::size_t>(j)]) = 1.0;
      break;
    case Kind::diagonal:
      for (int j = 0; j < obs_dim_; ++j)
        h.at(j, j) = diag_[static_cast<std::size_t>(j)];
      break;
    case Kind::dense:
      h = dense_;
      break;
  }
  return h;
}

void AssimilationProblem::validate() const {
  const auto m = static_cast<int>(background.size());
  const auto d = static_cast<int>(observation.size());
  if (op.state_dim() != m)
    throw shape_error("observation operator state dim " +
                      std::to_string(op.state_dim()) +
                      " != background dim " + std::to_string(m));
  if (op.obs_dim() != d)
    throw shape_error("observation operator obs dim " +
                      std::to_string(op.obs_dim()) + " != observation dim " +
                      std::to_string(d));
  if (cov_background.dim() != m)
    throw shape_error("background covariance dimension mismatch");
  if (cov_observation.dim() != d)
    throw shape_error("observation covariance dimension mismatch");
}

namespace {

std::vector<double> innovation_vector(const AssimilationProblem& p) {
  std::vector<double> hx(p.observation.size());
  p.op.apply(p.background, hx);
  std::vector<double> innov(p.observation.size());
  kernels::sub(innov, p.observation, hx);
  return innov;
}

}  // namespace

Matrix kalman_gain(const Covariance& b, const ObservationOperator& h,
                   const Covariance& o) {
  const int m = h.state_dim();
  const int d = h.obs_dim();
  if (b.dim() != m || o.dim() != d)
    throw shape_error("kalman_gain: covariance dimensions do not match H");

  const EMatrix hd = to_eigen(h.to_dense());
  EMatrix bd;
  if (b.is_diagonal()) {
    bd = EMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i) bd(i, i) = b.diag()[static_cast<std::size_t>(i)];
  } else {
    bd = to_eigen(b.dense_matrix());
  }
  EMatrix od;
  if (o.is_diagonal()) {
    od = EMatrix::Zero(d, d);
    for (int i = 0; i < d; ++i) od(i, i) = o.diag()[static_cast<std::size_t>(i)];
  } else {
    od = to_eigen(o.dense_matrix());
  }

  const EMatrix bht = bd * hd.transpose();
  EMatrix s = hd * bht + od;
  s = 0.5 * (s + s.transpose());
  check_condition(s, "innovation matrix H B H^T + O");
  Eigen::LLT<EMatrix> llt(s);
  if (llt.info() != Eigen::Success)
    throw numeric_error("innovation matrix is not positive definite");
  // K = B H^T S^{-1} via the SPD solve S X = H B.
  const EMatrix k = llt.solve(bht.transpose()).transpose();
  return from_eigen(k);
}

AssimilationResult blue_update(const AssimilationProblem& p, bool with_cov) {
  p.validate();
  AssimilationResult res;
  std::vector<double> innov = innovation_vector(p);
  res.innovation_norm = std::sqrt(kernels::dot(innov, innov));
  res.analysis = p.background;

  const bool diag_covs =
      p.cov_background.is_diagonal() && p.cov_observation.is_diagonal();

  if (p.op.kind() == ObservationOperator::Kind::sub_identity && diag_covs) {
    const auto& sel = p.op.selection();
    const auto& bd = p.cov_background.diag();
    const auto& od = p.cov_observation.diag();
    for (std::size_t j = 0; j < sel.size(); ++j) {
      const auto i = static_cast<std::size_t>(sel[j]);
      const double g = bd[i] / (bd[i] + od[j]);
      res.analysis[i] += g * innov[j];
    }
    if (with_cov) {
      Matrix pa = Matrix::zero(p.op.state_dim(), p.op.state_dim());
      for (int i = 0; i < p.op.state_dim(); ++i)
        pa.at(i, i) = bd[static_cast<std::size_t>(i)];
      for (std::size_t j = 0; j < sel.size(); ++j) {
        const auto i = sel[j];
        const double g = bd[static_cast<std::size_t>(i)] /
                         (bd[static_cast<std::size_t>(i)] + od[j]);
        pa.at(i, i) *= 1.0 - g;
      }
      res.analysis_cov = std::move(pa);
    }
    return res;
  }

  if (p.op.kind() == ObservationOperator::Kind::diagonal && diag_covs) {
    const auto& hd = p.op.diagonal_entries();
    const auto& bd = p.cov_background.diag();
    const auto& od = p.cov_observation.diag();
    for (std::size_t i = 0; i < hd.size(); ++i) {
      const double k = bd[i] * hd[i] / (hd[i] * hd[i] * bd[i] + od[i]);
      res.analysis[i] += k * innov[i];
    }
    if (with_cov) {
      Matrix pa = Matrix::zero(p.op.state_dim(), p.op.state_dim());
      for (std::size_t i = 0; i < hd.size(); ++i) {
        const double k = bd[i] * hd[i] / (hd[i] * hd[i] * bd[i] + od[i]);
        pa.at(static_cast<int>(i), static_cast<int>(i)) =
            (1.0 - k * hd[i]) * bd[i];
      }
      res.analysis_cov = std::move(pa);
    }
    return res;
  }

  const Matrix k = kalman_gain(p.cov_background, p.op, p.cov_observation);
  for (int i = 0; i < k.rows; ++i) {
    double acc = 0.0;
    for (int j = 0; j < k.cols; ++j)
      acc += k.at(i, j) * innov[static_cast<std::size_t>(j)];
    res.analysis[static_cast<std::size_t>(i)] += acc;
  }
  if (with_cov) {
    const EMatrix ke = to_eigen(k);
    const EMatrix hd = to_eigen(p.op.to_dense());
    EMatrix bd;
    const int m = p.op.state_dim();
    if (p.cov_background.is_diagonal()) {
      bd = EMatrix::Zero(m, m);
      for (int i = 0; i < m; ++i)
        bd(i, i) = p.cov_background.diag()[static_cast<std::size_t>(i)];
    } else {
      bd = to_eigen(p.cov_background.dense_matrix());
    }
    res.analysis_cov =
        from_eigen((EMatrix::Identity(m, m) - ke * hd) * bd);
  }
  return res;
}

std::pair<double, std::vector<double>> cost_3dvar(
    std::span<const double> x, const AssimilationProblem& p) {
  p.validate();
  if (x.size() != p.background.size())
    throw shape_error("cost_3dvar: state dimension mismatch");

  std::vector<double> dx(x.size());
  kernels::sub(dx, x, p.background);

  std::vector<double> hx(p.observation.size());
  p.op.apply(x, hx);
  std::vector<double> dy(p.observation.size());
  kernels::sub(dy, p.observation, hx);

  const double j = 0.5 * p.cov_background.quadratic_inverse(dx) +
                   0.5 * p.cov_observation.quadratic_inverse(dy);

  std::vector<double> grad(x.size());
  p.cov_background.apply_inverse(dx, grad);
  std::vector<double> oinv_dy(dy.size());
  p.cov_observation.apply_inverse(dy, oinv_dy);
  std::vector<double> ht(x.size());
  p.op.apply_transpose(oinv_dy, ht);
  kernels::axpy(-1.0, ht, grad);
  return {j, std::move(grad)};
}

AssimilationResult minimize_3dvar(const AssimilationProblem& p, double tol,
                                  int max_iter) {
  p.validate();
  if (max_iter < 0) throw config_error("max_iter must be >= 0");

  const std::size_t m = p.background.size();
  std::vector<double> x = p.background;
  auto [fx, grad] = cost_3dvar(x, p);

  AssimilationResult res;
  {
    std::vector<double> innov = innovation_vector(p);
    res.innovation_norm = std::sqrt(kernels::dot(innov, innov));
  }

  constexpr std::size_t kMemory = 10;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  std::vector<double> direction(m), x_new(m), grad_new(m);
  std::vector<double> alpha_buf;

  int iter = 0;
  while (kernels::max_abs(grad) >= tol) {
    if (iter >= max_iter)
      throw convergence_error(
          "3D-VAR minimizer exhausted " + std::to_string(max_iter) +
              " iterations without reaching tolerance",
          x, iter);

    // Two-loop recursion for the quasi-Newton direction.
    direction = grad;
    const auto hist = s_hist.size();
    alpha_buf.assign(hist, 0.0);
    for (std::size_t h = hist; h-- > 0;) {
      alpha_buf[h] = rho_hist[h] * kernels::dot(s_hist[h], direction);
      kernels::axpy(-alpha_buf[h], y_hist[h], direction);
    }
    if (hist > 0) {
      const double yy = kernels::dot(y_hist.back(), y_hist.back());
      const double sy = kernels::dot(s_hist.back(), y_hist.back());
      if (yy > 0.0) kernels::scale(direction, sy / yy);
    }
    for (std::size_t h = 0; h < hist; ++h) {
      const double beta = rho_hist[h] * kernels::dot(y_hist[h], direction);
      kernels::axpy(alpha_buf[h] - beta, s_hist[h], direction);
    }
    kernels::scale(direction, -1.0);

    double dir_dot_grad = kernels::dot(direction, grad);
    if (dir_dot_grad >= 0.0) {  // not a descent direction; fall back
      direction = grad;
      kernels::scale(direction, -1.0);
      dir_dot_grad = -kernels::dot(grad, grad);
    }

    // Armijo backtracking.
    double step = 1.0;
    if (iter == 0) {
      const double gnorm = std::sqrt(kernels::dot(grad, grad));
      if (gnorm > 1.0) step = 1.0 / gnorm;
    }
    constexpr double kArmijo = 1e-4;
    double fx_new = fx;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = x;
      kernels::axpy(step, direction, x_new);
      auto [f_trial, g_trial] = cost_3dvar(x_new, p);
      if (f_trial <= fx + kArmijo * step * dir_dot_grad) {
        fx_new = f_trial;
        grad_new = std::move(g_trial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw convergence_error("3D-VAR line search failed to make progress", x,
                              iter);

    std::vector<double> s(m), yv(m);
    kernels::sub(s, x_new, x);
    kernels::sub(yv, grad_new, grad);
    const double sy = kernels::dot(s, yv);
    if (sy > 1e-12 * std::sqrt(kernels::dot(s, s)) *
                 std::sqrt(kernels::dot(yv, yv))) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > kMemory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }
    x = std::move(x_new);
    x_new.assign(m, 0.0);
    grad = std::move(grad_new);
    grad_new.assign(m, 0.0);
    fx = fx_new;
    ++iter;
  }

  res.analysis = std::move(x);
  res.iterations = iter;
  return res;
}

NetworkAssimilator::NetworkAssimilator(Partition partition, double b_scale,
                                       double o_scale)
    : partition_(std::move(partition)) {
  if (!(b_scale > 0.0) || !(o_scale > 0.0))
    throw config_error("covariance scales must be positive");
  // Scalar gain of the sub-identity BLUE update with B = b I, O = o I;
  // invariant prior covariances make it valid at every step.
  gain_ = b_scale / (b_scale + o_scale);
  gain_computations_ = 1;
}

Graph NetworkAssimilator::assimilate(const Graph& background,
                                     const std::vector<Edge>& observed) const {
  if (background.directed())
    throw config_error("network assimilation expects an undirected background");
  if (partition_.assignment.size() != static_cast<std::size_t>(background.n()))
    throw shape_error("partition does not match background graph size");

  std::unordered_map<std::uint64_t, double> analyzed;
  analyzed.reserve(observed.size());
  auto key = [](NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  };

  for (const Edge& e : observed) {
    if (e.u < 0 || e.u >= background.n() || e.v < 0 || e.v >= background.n())
      throw contract_violation("observed edge endpoint out of range");
    if (partition_.assignment[static_cast<std::size_t>(e.u)] !=
        partition_.assignment[static_cast<std::size_t>(e.v)])
      throw contract_violation(
          "observed edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
          ") is not intra-community");
    const auto [it, inserted] = analyzed.try_emplace(key(e.u, e.v), e.w);
    if (!inserted)
      throw contract_violation("duplicate observed coordinate (" +
                               std::to_string(e.u) + "," +
                               std::to_string(e.v) + ")");
  }

  GraphBuilder gb(background.n(), false);
  // Background-supported coordinates: observed ones move toward the
  // observation by the precomputed gain, unobserved ones pass through.
  for (const Edge& e : background.edges()) {
    const auto it = analyzed.find(key(e.u, e.v));
    if (it == analyzed.end()) {
      gb.add_edge(e.u, e.v, e.w);
    } else {
      gb.add_edge(e.u, e.v, e.w + gain_ * (it->second - e.w));
      it->second = 0.0;  // consumed; sentinel for the pass below
    }
  }
  // Observed coordinates with zero background weight.
  for (const Edge& e : observed) {
    const auto it = analyzed.find(key(e.u, e.v));
    if (it->second != 0.0) gb.add_edge(e.u, e.v, gain_ * it->second);
  }
  return gb.build();
}

Graph assimilate_network(const Graph& background,
                         const std::vector<Edge>& observed,
                         const Partition& partition, double b_scale,
                         double o_scale) {
  return NetworkAssimilator(partition, b_scale, o_scale)
      .assimilate(background, observed);
}

}  // namespace netda::assim
