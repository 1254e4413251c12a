#pragma once

#include <Eigen/Dense>
#include <vector>

namespace limeaudit {

/// Result of one weighted LASSO solve.
struct LassoFit {
  Eigen::VectorXd coefficients;  ///< length p, original feature order
  double intercept = 0.0;
  double lambda = 0.0;
  std::vector<int> active_set;  ///< sorted indices with nonzero coefficient
  int iterations = 0;           ///< completed coordinate-descent sweeps
  bool converged = false;
};

/// Optional instrumentation for coordinate descent.
struct LassoDiagnostics {
  std::vector<double> objective_per_sweep;
};

/// Minimize (1 / sum w) * sum_i w_i (y_i - b - x_i' beta)^2 / 2 + lambda * |beta|_1
/// over (b, beta) by cyclic coordinate descent with soft-thresholding.
/// The intercept is unpenalized. Features are used as given; standardization
/// is the caller's job. converged is true iff the max coefficient change in a
/// sweep dropped below tol before max_iter sweeps.
LassoFit fit_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const Eigen::VectorXd& w, double lambda,
                            double tol = 1e-7, int max_iter = 10000,
                            LassoDiagnostics* diag = nullptr);

/// Smallest lambda for which the LASSO active set is empty: the largest
/// absolute weighted correlation between a centered column and centered y.
double lasso_lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const Eigen::VectorXd& w);

/// Max violation of the stationarity conditions for a fit:
/// for active j, |g_j - lambda * sign(beta_j)|; for inactive j,
/// max(0, |g_j| - lambda); plus the intercept optimality |mean_w(r)|,
/// where g_j is the weighted residual correlation of column j.
double kkt_violation(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                     const Eigen::VectorXd& w, double lambda,
                     const LassoFit& fit);

/// Weighted least-squares refit on a column subset, intercept included.
struct WlsFit {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  bool ridge_fallback = false;  ///< true when rank deficiency forced a 1e-8 ridge
};

/// Solves the weighted normal equations for X_sub plus an intercept.
/// Rank-deficient systems are silently regularized with a 1e-8 ridge on the
/// coefficient block (the intercept stays unpenalized).
WlsFit wls_refit(const Eigen::MatrixXd& X_sub, const Eigen::VectorXd& y,
                 const Eigen::VectorXd& w);

/// K-LASSO selection: the sparse surrogate cut to at most K features.
struct KLassoSelection {
  std::vector<int> selected;  ///< size min(K, reachable), in path-entry order
  Eigen::VectorXd refit_coefficients;  ///< one per selected index
  double refit_intercept = 0.0;
  double lambda_at_selection = 0.0;
  int k = 0;  ///< requested sparsity
};

struct KLassoOptions {
  int grid_points = 100;     ///< geometric lambda grid size
  double grid_ratio = 1e-3;  ///< lambda_min / lambda_max
  double tol = 1e-7;
  int max_iter = 10000;
};

/// Descend a geometric lambda grid from lambda_max with warm starts and
/// return the first fit whose active set reaches K features, truncated to
/// the K largest |coefficient| (ties to the lower index). Coefficients come
/// from a weighted least-squares refit on the selected columns. If the path
/// never reaches K active features, every feature that ever activated is
/// returned. Deterministic: identical inputs give identical selections.
KLassoSelection k_lasso_select(const Eigen::MatrixXd& X,
                               const Eigen::VectorXd& y,
                               const Eigen::VectorXd& w, int k,
                               const KLassoOptions& opts = {});

}  // namespace limeaudit
