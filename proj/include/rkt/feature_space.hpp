#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rkt/errors.hpp"
#include "rkt/kernels.hpp"
#include "rkt/matrix.hpp"

namespace rkt {

struct ridge_model {
  std::vector<std::string> class_labels;  // index order = prediction tie-break order
  matrix weights;                         // num_classes x num_features
  std::vector<double> intercepts;
  double lambda = 1.0;
  std::vector<double> column_mean;   // train-set feature statistics
  std::vector<double> column_scale;  // population std; zero-variance columns get 1
};

// Ten log-spaced regularization strengths spanning [1e-3, 1e3].
inline std::vector<double> default_lambda_grid() {
  std::vector<double> g(10);
  for (int t = 0; t < 10; ++t) g[t] = std::pow(10.0, -3.0 + 6.0 * t / 9.0);
  return g;
}

namespace detail {

using emat = Eigen::MatrixXd;
using evec = Eigen::VectorXd;

inline emat to_eigen(const feature_matrix& fm) {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                        Eigen::RowMajor>>(
      fm.data.data(), static_cast<Eigen::Index>(fm.rows),
      static_cast<Eigen::Index>(fm.cols));
}

// Closed-form ridge with an unpenalized intercept, solved through one
// eigendecomposition that is then reused for every lambda on the grid. The
// primal (p x p) form is used when features are few, the dual (m x m) Gram
// form when they outnumber the instances.
class ridge_solver {
 public:
  ridge_solver(const emat& x_train, const emat& y_train)
      : mu_(x_train.colwise().mean()), ybar_(y_train.colwise().mean()) {
    xc_ = x_train.rowwise() - mu_;
    yc_ = y_train.rowwise() - ybar_;
    primal_ = x_train.cols() <= x_train.rows();
    const emat gram = primal_ ? emat(xc_.transpose() * xc_) : emat(xc_ * xc_.transpose());
    Eigen::SelfAdjointEigenSolver<emat> eig(gram);
    if (eig.info() != Eigen::Success)
      throw error("ridge eigendecomposition failed");
    q_ = eig.eigenvectors();
    evals_ = eig.eigenvalues();
    if (primal_)
      rhs_ = q_.transpose() * (xc_.transpose() * yc_);
    else
      rhs_ = q_.transpose() * yc_;
  }

  // Per-class weight matrix (p x C) for one lambda.
  emat weights(double lambda) const {
    const evec inv = (evals_.array() + lambda).inverse().matrix();
    const emat solved = q_ * (inv.asDiagonal() * rhs_);
    return primal_ ? solved : emat(xc_.transpose() * solved);
  }

  // Scores for held-out rows without materializing the weights.
  emat scores(const emat& x_eval, double lambda) const {
    const evec inv = (evals_.array() + lambda).inverse().matrix();
    const emat centered = x_eval.rowwise() - mu_;
    if (primal_)
      return (centered * (q_ * (inv.asDiagonal() * rhs_))).rowwise() + ybar_;
    const emat cross = centered * xc_.transpose();
    return (cross * (q_ * (inv.asDiagonal() * rhs_))).rowwise() + ybar_;
  }

  const Eigen::RowVectorXd& mu() const { return mu_; }
  const Eigen::RowVectorXd& ybar() const { return ybar_; }

 private:
  Eigen::RowVectorXd mu_;
  Eigen::RowVectorXd ybar_;
  emat xc_;
  emat yc_;
  bool primal_ = false;
  emat q_;
  evec evals_;
  emat rhs_;
};

inline std::size_t argmax_row(const Eigen::RowVectorXd& scores) {
  std::size_t best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c)
    if (scores(c) > scores(best)) best = static_cast<std::size_t>(c);
  return best;
}

}  // namespace detail

// One-vs-rest ridge regression on +/-1 targets over train-standardized columns.
// With more than one lambda on the grid the strength is chosen by k-fold
// cross-validated accuracy (round-robin fold assignment; ties prefer the
// smaller lambda); a single-value grid skips validation and fits directly.
inline ridge_model fit_ridge(const feature_matrix& train,
                             const std::vector<std::string>& labels,
                             std::vector<double> lambda_grid = default_lambda_grid(),
                             unsigned folds = 5) {
  if (labels.size() != train.rows)
    throw dimension_error("fit_ridge: " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(train.rows) + " rows");
  if (train.rows < 2) throw std::invalid_argument("fit_ridge: need >= 2 instances");
  if (lambda_grid.empty()) throw std::invalid_argument("fit_ridge: empty lambda grid");
  for (double l : lambda_grid)
    if (!(l > 0.0)) throw std::invalid_argument("fit_ridge: lambda must be > 0");
  std::sort(lambda_grid.begin(), lambda_grid.end());

  ridge_model model;
  {
    std::map<std::string, std::size_t> seen;
    for (const auto& l : labels) seen.emplace(l, 0);
    for (auto& [name, idx] : seen) {
      idx = model.class_labels.size();
      model.class_labels.push_back(name);
    }
    if (model.class_labels.size() < 2)
      throw std::invalid_argument("fit_ridge: need >= 2 classes");
  }
  const std::size_t n_class = model.class_labels.size();
  std::vector<std::size_t> y_idx(labels.size());
  {
    std::map<std::string, std::size_t> index_of;
    for (std::size_t c = 0; c < n_class; ++c) index_of[model.class_labels[c]] = c;
    for (std::size_t i = 0; i < labels.size(); ++i) y_idx[i] = index_of[labels[i]];
  }

  // Column standardization from full-train statistics.
  detail::emat x = detail::to_eigen(train);
  model.column_mean.resize(train.cols);
  model.column_scale.resize(train.cols);
  for (std::size_t c = 0; c < train.cols; ++c) {
    const double mean = x.col(static_cast<Eigen::Index>(c)).mean();
    const double var =
        (x.col(static_cast<Eigen::Index>(c)).array() - mean).square().mean();
    model.column_mean[c] = mean;
    model.column_scale[c] = var > 0.0 ? std::sqrt(var) : 1.0;
    x.col(static_cast<Eigen::Index>(c)) =
        (x.col(static_cast<Eigen::Index>(c)).array() - mean) / model.column_scale[c];
  }

  detail::emat y(train.rows, n_class);
  y.setConstant(-1.0);
  for (std::size_t i = 0; i < train.rows; ++i)
    y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y_idx[i])) = 1.0;

  double best_lambda = lambda_grid.front();
  if (lambda_grid.size() > 1) {
    if (folds < 2) throw std::invalid_argument("fit_ridge: folds must be >= 2");
    if (train.rows < 2 * folds)
      throw std::invalid_argument("fit_ridge: need >= 2*folds instances");

    std::vector<std::uint64_t> correct(lambda_grid.size(), 0);
    for (unsigned fold = 0; fold < folds; ++fold) {
      std::vector<Eigen::Index> tr, va;
      for (std::size_t i = 0; i < train.rows; ++i)
        (i % folds == fold ? va : tr).push_back(static_cast<Eigen::Index>(i));
      const detail::emat xtr = x(tr, Eigen::all);
      const detail::emat xva = x(va, Eigen::all);
      const detail::emat ytr = y(tr, Eigen::all);
      const detail::ridge_solver solver(xtr, ytr);
      for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
        const detail::emat scores = solver.scores(xva, lambda_grid[li]);
        for (std::size_t vi = 0; vi < va.size(); ++vi)
          if (detail::argmax_row(scores.row(static_cast<Eigen::Index>(vi))) ==
              y_idx[static_cast<std::size_t>(va[vi])])
            ++correct[li];
      }
    }
    std::size_t best = 0;
    for (std::size_t li = 1; li < lambda_grid.size(); ++li)
      if (correct[li] > correct[best]) best = li;
    best_lambda = lambda_grid[best];
  }

  const detail::ridge_solver solver(x, y);
  const detail::emat w = solver.weights(best_lambda);  // p x C
  model.lambda = best_lambda;
  model.weights = matrix(n_class, train.cols);
  for (std::size_t c = 0; c < n_class; ++c)
    for (std::size_t p = 0; p < train.cols; ++p)
      model.weights.at(c, p) = w(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c));
  model.intercepts.resize(n_class);
  for (std::size_t c = 0; c < n_class; ++c) {
    double acc = solver.ybar()(static_cast<Eigen::Index>(c));
    for (std::size_t p = 0; p < train.cols; ++p)
      acc -= solver.mu()(static_cast<Eigen::Index>(p)) * model.weights.at(c, p);
    model.intercepts[c] = acc;
  }
  return model;
}

// Per-class decision scores for each row, in the model's standardized space.
inline matrix decision_scores(const ridge_model& model, const feature_matrix& fm) {
  if (fm.cols != model.column_mean.size())
    throw dimension_error("predict: feature count " + std::to_string(fm.cols) +
                          " does not match model feature count " +
                          std::to_string(model.column_mean.size()));
  const std::size_t n_class = model.class_labels.size();
  matrix scores(fm.rows, n_class);
  for (std::size_t r = 0; r < fm.rows; ++r) {
    for (std::size_t c = 0; c < n_class; ++c) {
      double acc = model.intercepts[c];
      for (std::size_t p = 0; p < fm.cols; ++p) {
        const double std_val =
            (fm.at(r, p) - model.column_mean[p]) / model.column_scale[p];
        acc += std_val * model.weights.at(c, p);
      }
      scores.at(r, c) = acc;
    }
  }
  return scores;
}

// Argmax over per-class scores; ties resolve to the smaller class index.
inline std::vector<std::string> predict(const ridge_model& model,
                                        const feature_matrix& fm) {
  const matrix scores = decision_scores(model, fm);
  std::vector<std::string> out(fm.rows);
  for (std::size_t r = 0; r < fm.rows; ++r) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < model.class_labels.size(); ++c)
      if (scores.at(r, c) > scores.at(r, best)) best = c;
    out[r] = model.class_labels[best];
  }
  return out;
}

struct pca_report {
  std::vector<double> explained_variance_ratio;  // descending, sums to <= 1
  std::size_t k90 = 0;
  std::size_t k95 = 0;
  std::vector<std::pair<double, std::size_t>> threshold_ks;  // requested thresholds
  std::size_t total_features = 0;
  std::string scope;  // which rows went in (e.g. "pooled", "train"); informational
};

// Spectrum of the column-centered feature matrix via singular values (the
// covariance matrix is never materialized). k(t) is the shortest prefix of
// components whose cumulative explained variance reaches t.
inline pca_report pca_effective_dim(const feature_matrix& fm,
                                    const std::vector<double>& thresholds = {0.90,
                                                                             0.95}) {
  if (fm.rows < 2)
    throw std::invalid_argument("pca_effective_dim: need >= 2 instances");
  for (double t : thresholds)
    if (!(t > 0.0) || t > 1.0)
      throw std::invalid_argument("pca_effective_dim: thresholds must lie in (0, 1]");

  detail::emat x = detail::to_eigen(fm);
  const Eigen::RowVectorXd col_mean = x.colwise().mean();
  x.rowwise() -= col_mean;
  Eigen::BDCSVD<detail::emat> svd(x);
  const detail::evec sv = svd.singularValues();

  pca_report rep;
  rep.total_features = fm.cols;
  rep.explained_variance_ratio.resize(static_cast<std::size_t>(sv.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) total += sv(i) * sv(i);
  if (total == 0.0) {
    for (auto& r : rep.explained_variance_ratio) r = 0.0;
    for (double t : thresholds) rep.threshold_ks.emplace_back(t, 0);
    return rep;
  }
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    rep.explained_variance_ratio[static_cast<std::size_t>(i)] = sv(i) * sv(i) / total;

  const auto k_for = [&](double t) -> std::size_t {
    double cum = 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      cum += sv(i) * sv(i);
      if (cum >= t * total) return static_cast<std::size_t>(i) + 1;
    }
    return static_cast<std::size_t>(sv.size());
  };
  rep.k90 = k_for(0.90);
  rep.k95 = k_for(0.95);
  for (double t : thresholds) rep.threshold_ks.emplace_back(t, k_for(t));
  return rep;
}

}  // namespace rkt
