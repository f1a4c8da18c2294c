#include <cmath>

#include "sbm/analysis.hpp"
#include "sbm/errors.hpp"
#include "sbm/likelihood.hpp"

namespace sbm {
namespace {

constexpr double kSeparationBound = 50.0;

double loglik(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) acc += y[i] * eta[i] - log1p_exp(eta[i]);
  return acc;
}

}  // namespace

LogitFit logistic_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, int max_iter,
                      double tol) {
  const auto rows = design.rows(), cols = design.cols();
  if (rows != y.size()) throw DataError("design and response have different lengths");
  if (rows < cols) throw DataError("fewer observations than coefficients");
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (y[i] != 0.0 && y[i] != 1.0) throw DataError("response must be binary");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < cols) throw DataError("design matrix is rank deficient");

  LogitFit fit;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
  Eigen::VectorXd eta = design * beta;
  double ll = loglik(eta, y);
  Eigen::MatrixXd info(cols, cols);

  auto score_and_info = [&](const Eigen::VectorXd& eta_now, Eigen::VectorXd& score) {
    Eigen::VectorXd p(rows), w(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
      p[i] = logistic(eta_now[i]);
      w[i] = logistic_variance(eta_now[i]);
    }
    score = design.transpose() * (y - p);
    info = design.transpose() * w.asDiagonal() * design;
  };

  Eigen::VectorXd score;
  score_and_info(eta, score);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (score.norm() <= tol) {
      fit.converged = true;
      break;
    }
    if (beta.lpNorm<Eigen::Infinity>() > kSeparationBound) break;
    const Eigen::VectorXd step = info.ldlt().solve(score);
    double t = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = beta + t * step;
      const Eigen::VectorXd trial_eta = design * trial;
      const double trial_ll = loglik(trial_eta, y);
      if (std::isfinite(trial_ll) && (trial_ll > ll || (halving == 0 && trial_ll >= ll))) {
        beta = trial;
        eta = trial_eta;
        ll = trial_ll;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // The log-likelihood is flat to rounding here; take the full step if
      // it shrinks the score.
      const Eigen::VectorXd trial = beta + step;
      const Eigen::VectorXd trial_eta = design * trial;
      Eigen::VectorXd trial_score;
      const Eigen::MatrixXd saved = info;
      score_and_info(trial_eta, trial_score);
      if (!(trial_score.norm() < score.norm())) {
        info = saved;
        break;
      }
      beta = trial;
      eta = trial_eta;
      ll = loglik(eta, y);
      score = trial_score;
      continue;
    }
    score_and_info(eta, score);
  }
  fit.converged = fit.converged || score.norm() <= tol;

  // Fitted probabilities that reproduce every response exactly mean the
  // likelihood has no finite maximizer.
  bool perfect = true;
  for (Eigen::Index i = 0; i < rows && perfect; ++i) {
    perfect = std::abs(y[i] - logistic(eta[i])) < 1e-6;
  }
  fit.separation_flag = perfect || beta.lpNorm<Eigen::Infinity>() > kSeparationBound;
  if (fit.separation_flag) fit.converged = false;

  fit.iterations = iter;
  fit.coefficients = beta;
  fit.loglik = ll;
  fit.gradient_norm = score.norm();
  const Eigen::MatrixXd cov = info.ldlt().solve(Eigen::MatrixXd::Identity(cols, cols));
  fit.standard_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.z_values = beta.cwiseQuotient(fit.standard_errors);
  fit.p_values.resize(cols);
  for (Eigen::Index k = 0; k < cols; ++k) {
    fit.p_values[k] = std::erfc(std::abs(fit.z_values[k]) / std::sqrt(2.0));
  }
  return fit;
}

}  // namespace sbm
