#include "srp/cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srp/errors.hpp"
#include "srp/lp.hpp"

namespace srp {

namespace {

Eigen::VectorXd least_squares_on(const Eigen::MatrixXd& gamma, const std::vector<int>& passive,
                                 const Eigen::VectorXd& target) {
  Eigen::MatrixXd sub(gamma.rows(), passive.size());
  for (std::size_t k = 0; k < passive.size(); ++k) sub.col(k) = gamma.col(passive[k]);
  // minimum-norm solution keeps degenerate passive sets tame
  return sub.completeOrthogonalDecomposition().solve(target);
}

}  // namespace

ConeFitResult nnls(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho,
                   const Eigen::VectorXd& lower, const NnlsOptions& options,
                   NnlsWorkspace* workspace) {
  const int h = static_cast<int>(gamma.cols());
  if (rho.size() != gamma.rows()) throw ValidationError("nnls: rho length mismatch");
  if (lower.size() != h) throw ValidationError("nnls: lower bound length mismatch");
  if ((lower.array() < 0.0).any()) throw ValidationError("nnls: lower bounds must be >= 0");

  const long max_iter = options.max_iter > 0 ? options.max_iter : 10L * h + 200;
  const Eigen::VectorXd shifted_target = rho - gamma * lower;

  std::vector<int> passive;
  std::vector<char> in_passive(h, 0);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(h);

  if (workspace != nullptr) {
    for (int j : workspace->passive) {
      if (j >= 0 && j < h && !in_passive[j]) {
        passive.push_back(j);
        in_passive[j] = 1;
      }
    }
  }

  ConeFitResult result;
  long iter = 0;
  bool need_inner = !passive.empty();  // warm-started sets must be made feasible first

  Eigen::VectorXd residual = shifted_target;
  Eigen::VectorXd gradient = gamma.transpose() * residual;

  while (iter++ < max_iter) {
    if (!need_inner) {
      // outer step: pick the most violated inactive coordinate
      int best = -1;
      double best_w = options.tol;
      for (int j = 0; j < h; ++j) {
        if (!in_passive[j] && gradient[j] > best_w) {
          best_w = gradient[j];
          best = j;
        }
      }
      if (best < 0) {
        result.converged = true;
        break;
      }
      passive.push_back(best);
      in_passive[best] = 1;
    }
    need_inner = false;

    // inner loop: restore feasibility of the passive least-squares solution
    for (;;) {
      if (iter++ >= max_iter) break;
      Eigen::VectorXd z = least_squares_on(gamma, passive, shifted_target);
      bool all_positive = true;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        if (z[k] <= 0.0) {
          all_positive = false;
          break;
        }
      }
      if (all_positive) {
        for (std::size_t k = 0; k < passive.size(); ++k) mu[passive[k]] = z[k];
        break;
      }
      double alpha = 1.0;
      for (std::size_t k = 0; k < passive.size(); ++k) {
        if (z[k] <= 0.0) {
          const double mk = mu[passive[k]];
          const double step = mk / (mk - z[k]);
          alpha = std::min(alpha, step);
        }
      }
      for (std::size_t k = 0; k < passive.size(); ++k) {
        mu[passive[k]] += alpha * (z[k] - mu[passive[k]]);
      }
      std::vector<int> keep;
      keep.reserve(passive.size());
      for (int j : passive) {
        if (mu[j] > 1e-14) {
          keep.push_back(j);
        } else {
          mu[j] = 0.0;
          in_passive[j] = 0;
        }
      }
      passive.swap(keep);
      if (passive.empty()) break;
    }

    residual = shifted_target;
    for (int j : passive) residual -= gamma.col(j) * mu[j];
    gradient = gamma.transpose() * residual;
  }

  if (workspace != nullptr) workspace->passive = passive;
  result.iterations = static_cast<int>(iter);
  result.nu = mu + lower;
  result.eta = gamma * result.nu;
  result.squared_residual = (rho - result.eta).squaredNorm();
  return result;
}

ConeFitResult nnls(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho, double lower,
                   const NnlsOptions& options, NnlsWorkspace* workspace) {
  return nnls(gamma, rho, Eigen::VectorXd::Constant(gamma.cols(), lower), options, workspace);
}

FeasibilityResult feasibility(const Eigen::MatrixXd& gamma, const Eigen::VectorXd& rho,
                              double tol) {
  const int d = static_cast<int>(gamma.rows());
  const int h = static_cast<int>(gamma.cols());
  if (rho.size() != d) throw ValidationError("feasibility: rho length mismatch");

  // L1 fit: min 1'(u + v) s.t. gamma*nu + u - v = rho, all >= 0. Value zero
  // means feasible; otherwise the duals are the Farkas certificate
  // (y'gamma <= 0 from the nu columns, |y| <= 1 from u and v, y'rho = value).
  LpProblem p;
  p.a.resize(d, h + 2 * d);
  p.a.leftCols(h) = gamma;
  p.a.middleCols(h, d) = Eigen::MatrixXd::Identity(d, d);
  p.a.rightCols(d) = -Eigen::MatrixXd::Identity(d, d);
  p.b = rho;
  p.c = Eigen::VectorXd::Zero(h + 2 * d);
  p.c.tail(2 * d).setOnes();
  p.lower = Eigen::VectorXd::Zero(h + 2 * d);
  p.upper = Eigen::VectorXd::Constant(h + 2 * d, std::numeric_limits<double>::infinity());

  const LpResult lp = lp_solve(p);
  if (lp.status != LpStatus::Optimal) throw SolverError("feasibility: LP did not converge");

  FeasibilityResult result;
  if (lp.objective <= tol) {
    result.feasible = true;
    result.nu = lp.x.head(h);
    return result;
  }

  InfeasibilityCertificate cert;
  cert.y = lp.duals;
  cert.gamma_slack = (cert.y.transpose() * gamma).maxCoeff();
  cert.rho_gain = cert.y.dot(rho);
  if (cert.gamma_slack > 1e-9 || cert.rho_gain <= 0.0) {
    throw SolverError("feasibility: certificate failed validation");
  }
  result.feasible = false;
  result.certificate = cert;
  return result;
}

}  // namespace srp
