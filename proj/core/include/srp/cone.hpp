#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace srp {

// Result of projecting a target vector onto cone(gamma) intersected with the
// elementwise constraint nu >= lower.
struct ConeFitResult {
  Eigen::VectorXd nu;       // weights, length H, nu >= lower
  Eigen::VectorXd eta;      // fitted point gamma * nu
  double squared_residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct NnlsOptions {
  double tol = 1e-10;   // KKT tolerance on gradient entries
  long max_iter = -1;   // default: 10*H + 200
};

// Reusable across closely related solves (bootstrap loop); carries the
// passive set of the previous solution as a warm start.
struct NnlsWorkspace {
  std::vector<int> passive;
};

// min ||rho - gamma*nu||^2  s.t.  nu >= lower (elementwise), by the
// Lawson-Hanson active-set method shifted by the lower bound.
ConeFitResult nnls(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho,
                   const Eigen::VectorXd& lower, const NnlsOptions& options = {},
                   NnlsWorkspace* workspace = nullptr);
ConeFitResult nnls(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho,
                   double lower = 0.0, const NnlsOptions& options = {},
                   NnlsWorkspace* workspace = nullptr);

// y with y'gamma <= cert_tol componentwise and y'rho > 0, proving that
// {nu >= 0 : gamma nu = rho} is empty. Verifiable by direct multiplication.
struct InfeasibilityCertificate {
  Eigen::VectorXd y;
  double gamma_slack = 0.0;  // max component of y' gamma
  double rho_gain = 0.0;     // y' rho
};

struct FeasibilityResult {
  bool feasible = false;
  Eigen::VectorXd nu;  // valid when feasible
  std::optional<InfeasibilityCertificate> certificate;
};

// Exact feasibility of gamma*nu = rho, nu >= 0 by linear programming; on the
// infeasible side the Farkas certificate is validated numerically before it
// is returned.
FeasibilityResult feasibility(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho,
                              double tol = 1e-8);

}  // namespace srp
