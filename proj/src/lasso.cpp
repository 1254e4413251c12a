#include "limeaudit/lasso.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "limeaudit/errors.hpp"

namespace limeaudit {

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

// Weighted, centered view of a regression problem. Centering makes the
// intercept implicit: b = wmean(y) - wmean(X)' beta.
struct CenteredProblem {
  Eigen::VectorXd wn;      // weights normalized to sum 1
  Eigen::VectorXd x_mean;  // weighted column means
  double y_mean = 0.0;
  Eigen::MatrixXd gram;    // Xc' diag(wn) Xc
  Eigen::VectorXd corr;    // Xc' (wn .* yc)
  double y_sq = 0.0;       // yc' diag(wn) yc
};

void check_inputs(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& w, double lambda) {
  if (X.rows() != y.size() || X.rows() != w.size())
    throw ArgumentError("lasso: rows(X), len(y) and len(w) must agree");
  if (X.rows() < 1 || X.cols() < 1)
    throw ArgumentError("lasso: X must be nonempty");
  if (!X.allFinite() || !y.allFinite() || !w.allFinite() || !std::isfinite(lambda))
    throw ArgumentError("lasso: non-finite input");
  if (lambda < 0.0) throw ArgumentError("lasso: lambda must be nonnegative");
  if ((w.array() < 0.0).any()) throw ArgumentError("lasso: negative sample weight");
  if (w.sum() <= 0.0) throw ArgumentError("lasso: all sample weights are zero");
}

CenteredProblem center(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                       const Eigen::VectorXd& w) {
  CenteredProblem p;
  p.wn = w / w.sum();
  p.x_mean = X.transpose() * p.wn;
  p.y_mean = y.dot(p.wn);
  const Eigen::MatrixXd xc = X.rowwise() - p.x_mean.transpose();
  const Eigen::VectorXd yc = y.array() - p.y_mean;
  const Eigen::MatrixXd wxc = p.wn.asDiagonal() * xc;
  p.gram = xc.transpose() * wxc;
  p.corr = wxc.transpose() * yc;
  p.y_sq = yc.dot(p.wn.cwiseProduct(yc));
  return p;
}

// Cyclic coordinate descent on the centered problem. beta is updated in
// place; returns (sweeps, converged).
std::pair<int, bool> descend(const CenteredProblem& p, double lambda,
                             double tol, int max_iter, Eigen::VectorXd& beta,
                             LassoDiagnostics* diag) {
  const auto n_feat = static_cast<int>(p.gram.rows());
  Eigen::VectorXd gb = p.gram * beta;  // running gram * beta
  int sweeps = 0;
  bool converged = false;
  while (sweeps < max_iter) {
    ++sweeps;
    double max_delta = 0.0;
    for (int j = 0; j < n_feat; ++j) {
      const double gjj = p.gram(j, j);
      if (gjj <= 0.0) continue;  // constant column after centering
      const double rho = p.corr(j) - gb(j) + gjj * beta(j);
      const double updated = soft_threshold(rho, lambda) / gjj;
      const double delta = updated - beta(j);
      if (delta != 0.0) {
        gb += p.gram.col(j) * delta;
        beta(j) = updated;
        max_delta = std::max(max_delta, std::abs(delta));
      }
    }
    if (diag != nullptr) {
      const double fit_part = 0.5 * p.y_sq - p.corr.dot(beta) +
                              0.5 * beta.dot(p.gram * beta);
      diag->objective_per_sweep.push_back(fit_part +
                                          lambda * beta.lpNorm<1>());
    }
    if (max_delta < tol) {
      converged = true;
      break;
    }
  }
  return {sweeps, converged};
}

std::vector<int> nonzero_indices(const Eigen::VectorXd& beta) {
  std::vector<int> out;
  for (int j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) out.push_back(j);
  return out;
}

}  // namespace

LassoFit fit_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, double lambda,
                            double tol, int max_iter, LassoDiagnostics* diag) {
  check_inputs(X, y, w, lambda);
  const CenteredProblem p = center(X, y, w);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(X.cols());
  const auto [sweeps, converged] = descend(p, lambda, tol, max_iter, beta, diag);

  LassoFit fit;
  fit.coefficients = beta;
  fit.intercept = p.y_mean - p.x_mean.dot(beta);
  fit.lambda = lambda;
  fit.active_set = nonzero_indices(beta);
  fit.iterations = sweeps;
  fit.converged = converged;
  return fit;
}

double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& w) {
  check_inputs(X, y, w, 0.0);
  return center(X, y, w).corr.cwiseAbs().maxCoeff();
}

double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double lambda,
                     const LassoFit& fit) {
  check_inputs(X, y, w, lambda);
  if (fit.coefficients.size() != X.cols())
    throw ArgumentError("kkt_violation: coefficient length mismatch");
  const Eigen::VectorXd wn = w / w.sum();
  const Eigen::VectorXd r =
      y - Eigen::VectorXd::Constant(y.size(), fit.intercept) - X * fit.coefficients;
  double viol = std::abs(r.dot(wn));  // intercept stationarity
  for (int j = 0; j < X.cols(); ++j) {
    const double g = X.col(j).dot(wn.cwiseProduct(r));
    const double b = fit.coefficients(j);
    if (b != 0.0)
      viol = std::max(viol, std::abs(g - lambda * (b > 0.0 ? 1.0 : -1.0)));
    else
      viol = std::max(viol, std::max(0.0, std::abs(g) - lambda));
  }
  return viol;
}

WlsFit wls_refit(const Eigen::MatrixXd& X_sub, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w) {
  if (X_sub.rows() != y.size() || X_sub.rows() != w.size())
    throw ArgumentError("wls_refit: dimension mismatch");
  if (w.sum() <= 0.0) throw ArgumentError("wls_refit: all weights zero");
  const auto m = X_sub.cols();
  const Eigen::VectorXd wn = w / w.sum();

  Eigen::MatrixXd a(X_sub.rows(), m + 1);
  a.col(0).setOnes();
  a.rightCols(m) = X_sub;

  const Eigen::VectorXd sqrt_w = wn.cwiseSqrt();
  const Eigen::MatrixXd wa = sqrt_w.asDiagonal() * a;

  WlsFit out;
  Eigen::MatrixXd normal = a.transpose() * (wn.asDiagonal() * a);
  const Eigen::VectorXd rhs = a.transpose() * wn.cwiseProduct(y);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wa);
  if (qr.rank() < m + 1) {
    out.ridge_fallback = true;
    normal.bottomRightCorner(m, m).diagonal().array() += 1e-8;
  }
  const Eigen::VectorXd sol = normal.ldlt().solve(rhs);
  out.intercept = sol(0);
  out.coefficients = sol.tail(m);
  return out;
}

KLassoSelection k_lasso_select(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& w, int k,
                               const KLassoOptions& opts) {
  check_inputs(X, y, w, 0.0);
  if (k < 1) throw ArgumentError("k_lasso_select: K must be >= 1");
  if (opts.grid_points < 2) throw ArgumentError("k_lasso_select: grid too small");

  const CenteredProblem p = center(X, y, w);
  const double lmax = p.corr.cwiseAbs().maxCoeff();
  const auto n_feat = static_cast<int>(X.cols());

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n_feat);
  std::vector<int> entry_order;
  std::vector<bool> seen(static_cast<std::size_t>(n_feat), false);

  double lambda_sel = 0.0;
  bool reached_k = false;
  Eigen::VectorXd beta_sel;

  // lmax == 0 means y has no correlated signal; the whole grid collapses to
  // lambda = 0 and one unpenalized fit decides.
  const int steps = lmax > 0.0 ? opts.grid_points : 1;
  for (int t = 0; t < steps; ++t) {
    const double lambda =
        lmax > 0.0
            ? lmax * std::pow(opts.grid_ratio,
                              static_cast<double>(t) /
                                  static_cast<double>(opts.grid_points - 1))
            : 0.0;
    descend(p, lambda, opts.tol, opts.max_iter, beta, nullptr);
    for (int j = 0; j < n_feat; ++j) {
      if (beta(j) != 0.0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        entry_order.push_back(j);
      }
    }
    lambda_sel = lambda;
    const auto active = nonzero_indices(beta);
    if (static_cast<int>(active.size()) >= k) {
      reached_k = true;
      beta_sel = beta;
      break;
    }
  }

  std::vector<int> chosen;
  if (reached_k) {
    // Keep the K largest |coefficient|, ties to the lower index.
    std::vector<int> active = nonzero_indices(beta_sel);
    std::stable_sort(active.begin(), active.end(), [&](int a, int b) {
      const double aa = std::abs(beta_sel(a));
      const double bb = std::abs(beta_sel(b));
      if (aa != bb) return aa > bb;
      return a < b;
    });
    active.resize(static_cast<std::size_t>(k));
    // Report in path-entry order.
    for (int j : entry_order)
      if (std::find(active.begin(), active.end(), j) != active.end())
        chosen.push_back(j);
  } else {
    chosen = entry_order;  // every feature that ever activated
  }

  KLassoSelection sel;
  sel.selected = chosen;
  sel.lambda_at_selection = lambda_sel;
  sel.k = k;
  if (!chosen.empty()) {
    Eigen::MatrixXd x_sub(X.rows(), static_cast<Eigen::Index>(chosen.size()));
    for (std::size_t i = 0; i < chosen.size(); ++i)
      x_sub.col(static_cast<Eigen::Index>(i)) = X.col(chosen[i]);
    const WlsFit refit = wls_refit(x_sub, y, w);
    sel.refit_coefficients = refit.coefficients;
    sel.refit_intercept = refit.intercept;
  } else {
    sel.refit_coefficients = Eigen::VectorXd(0);
    sel.refit_intercept = p.y_mean;
  }
  return sel;
}

}  // namespace limeaudit
