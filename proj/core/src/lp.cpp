#include "srp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "srp/errors.hpp"

namespace srp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kReducedCostTol = 1e-9;
constexpr double kPivotTol = 1e-11;
constexpr int kBlandTrigger = 60;  // consecutive degenerate pivots before Bland's rule

enum class VarState { Basic, AtLower, AtUpper };

struct Tableau {
  Eigen::MatrixXd cols;    // m x n_total, column-major working copy
  Eigen::VectorXd lower, upper, cost, x;
  std::vector<VarState> state;
  std::vector<int> basis;  // row -> column
  int m = 0;
  int n_total = 0;
};

double start_value(double lo, double up) {
  if (std::isfinite(lo)) return lo;
  if (std::isfinite(up)) return up;
  throw ValidationError("lp_solve: variable with both bounds infinite");
}

// One simplex run on the current cost vector. Returns true when an optimal
// basis was reached, false on iteration limit; sets *unbounded on a ray.
bool simplex_iterate(Tableau& t, long max_iter, bool* unbounded) {
  *unbounded = false;
  int degenerate_run = 0;
  bool bland = false;

  Eigen::MatrixXd basis_mat(t.m, t.m);
  for (long iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i < t.m; ++i) basis_mat.col(i) = t.cols.col(t.basis[i]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_mat);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_t(basis_mat.transpose());

    Eigen::VectorXd cb(t.m);
    for (int i = 0; i < t.m; ++i) cb[i] = t.cost[t.basis[i]];
    Eigen::VectorXd y = lu_t.solve(cb);

    // entering variable
    int entering = -1;
    double best = kReducedCostTol;
    int direction = +1;  // +1: increase from lower, -1: decrease from upper
    for (int j = 0; j < t.n_total; ++j) {
      if (t.state[j] == VarState::Basic) continue;
      if (t.lower[j] == t.upper[j]) continue;  // fixed
      const double d = t.cost[j] - y.dot(t.cols.col(j));
      if (t.state[j] == VarState::AtLower && d < -kReducedCostTol) {
        if (bland) {
          entering = j;
          direction = +1;
          break;
        }
        if (-d > best) {
          best = -d;
          entering = j;
          direction = +1;
        }
      } else if (t.state[j] == VarState::AtUpper && d > kReducedCostTol) {
        if (bland) {
          entering = j;
          direction = -1;
          break;
        }
        if (d > best) {
          best = d;
          entering = j;
          direction = -1;
        }
      }
    }
    if (entering < 0) return true;  // optimal

    Eigen::VectorXd w = lu.solve(t.cols.col(entering));

    // ratio test: x_B moves by -direction * w * delta
    double limit = kInf;
    int blocking_row = -1;
    bool blocking_to_upper = false;
    for (int i = 0; i < t.m; ++i) {
      const double rate = direction * w[i];
      const int bj = t.basis[i];
      if (rate > kPivotTol) {
        if (std::isfinite(t.lower[bj])) {
          const double step = (t.x[bj] - t.lower[bj]) / rate;
          if (step < limit - 1e-15 || (std::abs(step - limit) <= 1e-15 && bland &&
                                       (blocking_row < 0 || bj < t.basis[blocking_row]))) {
            limit = std::max(step, 0.0);
            blocking_row = i;
            blocking_to_upper = false;
          }
        }
      } else if (rate < -kPivotTol) {
        if (std::isfinite(t.upper[bj])) {
          const double step = (t.upper[bj] - t.x[bj]) / (-rate);
          if (step < limit - 1e-15 || (std::abs(step - limit) <= 1e-15 && bland &&
                                       (blocking_row < 0 || bj < t.basis[blocking_row]))) {
            limit = std::max(step, 0.0);
            blocking_row = i;
            blocking_to_upper = true;
          }
        }
      }
    }
    // entering variable's own opposite bound
    const double span = t.upper[entering] - t.lower[entering];
    bool bound_flip = false;
    if (std::isfinite(span) && span <= limit) {
      limit = span;
      bound_flip = true;
      blocking_row = -1;
    }

    if (!std::isfinite(limit)) {
      *unbounded = true;
      return true;
    }

    // apply step
    for (int i = 0; i < t.m; ++i) t.x[t.basis[i]] -= direction * w[i] * limit;
    t.x[entering] = (t.state[entering] == VarState::AtLower) ? t.lower[entering] + direction * limit
                                                             : t.upper[entering] + direction * limit;
    if (bound_flip) {
      t.state[entering] =
          (t.state[entering] == VarState::AtLower) ? VarState::AtUpper : VarState::AtLower;
    } else {
      const int leaving = t.basis[blocking_row];
      t.state[leaving] = blocking_to_upper ? VarState::AtUpper : VarState::AtLower;
      t.x[leaving] = blocking_to_upper ? t.upper[leaving] : t.lower[leaving];
      t.state[entering] = VarState::Basic;
      t.basis[blocking_row] = entering;
    }

    if (limit <= 1e-12) {
      if (++degenerate_run >= kBlandTrigger) bland = true;
    } else {
      degenerate_run = 0;
      bland = false;
    }
  }
  return false;
}

}  // namespace

LpResult lp_solve(const LpProblem& problem) {
  const int m = static_cast<int>(problem.a.rows());
  const int n = static_cast<int>(problem.a.cols());
  if (problem.b.size() != m || problem.c.size() != n || problem.lower.size() != n ||
      problem.upper.size() != n) {
    throw ValidationError("lp_solve: inconsistent dimensions");
  }
  if (!problem.rel.empty() && static_cast<int>(problem.rel.size()) != m) {
    throw ValidationError("lp_solve: rel size must match row count");
  }
  for (int j = 0; j < n; ++j) {
    if (problem.lower[j] > problem.upper[j]) {
      throw ValidationError("lp_solve: lower bound exceeds upper bound");
    }
  }

  int n_slack = 0;
  for (const Rel r : problem.rel)
    if (r != Rel::Eq) ++n_slack;

  Tableau t;
  t.m = m;
  t.n_total = n + n_slack + m;  // structural + slack + artificial
  t.cols.setZero(m, t.n_total);
  t.cols.leftCols(n) = problem.a;
  t.lower.setConstant(t.n_total, 0.0);
  t.upper.setConstant(t.n_total, kInf);
  t.cost.setZero(t.n_total);
  t.x.setZero(t.n_total);
  t.state.assign(t.n_total, VarState::AtLower);
  t.basis.assign(m, -1);

  t.lower.head(n) = problem.lower;
  t.upper.head(n) = problem.upper;
  for (int j = 0; j < n; ++j) {
    const double v = start_value(problem.lower[j], problem.upper[j]);
    t.x[j] = v;
    t.state[j] = (v == problem.lower[j]) ? VarState::AtLower : VarState::AtUpper;
  }
  int slack = n;
  for (int i = 0; i < m; ++i) {
    if (problem.rel.empty() || problem.rel[i] == Rel::Eq) continue;
    t.cols(i, slack) = (problem.rel[i] == Rel::Le) ? 1.0 : -1.0;
    ++slack;
  }

  // artificial basis absorbing the initial residual
  Eigen::VectorXd residual = problem.b;
  for (int j = 0; j < n; ++j)
    if (t.x[j] != 0.0) residual -= problem.a.col(j) * t.x[j];
  for (int i = 0; i < m; ++i) {
    const int aj = n + n_slack + i;
    t.cols(i, aj) = (residual[i] >= 0.0) ? 1.0 : -1.0;
    t.x[aj] = std::abs(residual[i]);
    t.state[aj] = VarState::Basic;
    t.cost[aj] = 1.0;
    t.basis[i] = aj;
  }

  const long max_iter = 2000 + 20L * m + 4L * t.n_total;
  bool unbounded = false;

  // phase 1
  if (!simplex_iterate(t, max_iter, &unbounded)) {
    LpResult res;
    res.status = LpStatus::IterationLimit;
    res.x = t.x.head(n);
    return res;
  }
  double infeas = 0.0;
  for (int i = n + n_slack; i < t.n_total; ++i) infeas += t.x[i];
  const double feas_tol = 1e-9 * (1.0 + problem.b.cwiseAbs().maxCoeff());
  if (unbounded) throw SolverError("lp_solve: phase-1 reported an unbounded ray");
  if (infeas > feas_tol) {
    LpResult res;
    res.status = LpStatus::Infeasible;
    res.objective = infeas;
    res.x = t.x.head(n);
    // duals of the phase-1 optimum
    Eigen::MatrixXd basis_mat(m, m);
    for (int i = 0; i < m; ++i) basis_mat.col(i) = t.cols.col(t.basis[i]);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = t.cost[t.basis[i]];
    res.farkas = basis_mat.transpose().partialPivLu().solve(cb);
    return res;
  }

  // phase 2: pin artificials to zero, restore true costs
  for (int i = n + n_slack; i < t.n_total; ++i) {
    t.upper[i] = 0.0;
    t.lower[i] = 0.0;
    t.cost[i] = 0.0;
    if (t.state[i] != VarState::Basic) t.x[i] = 0.0;
  }
  t.cost.setZero();
  t.cost.head(n) = problem.maximize ? (-problem.c).eval() : problem.c;

  if (!simplex_iterate(t, max_iter, &unbounded)) {
    LpResult res;
    res.status = LpStatus::IterationLimit;
    res.x = t.x.head(n);
    return res;
  }
  LpResult res;
  res.x = t.x.head(n);
  if (unbounded) {
    res.status = LpStatus::Unbounded;
    res.objective = problem.maximize ? kInf : -kInf;
    return res;
  }
  res.status = LpStatus::Optimal;
  res.objective = problem.c.dot(res.x);
  {
    Eigen::MatrixXd basis_mat(m, m);
    for (int i = 0; i < m; ++i) basis_mat.col(i) = t.cols.col(t.basis[i]);
    Eigen::VectorXd cb(m);
    for (int i = 0; i < m; ++i) cb[i] = t.cost[t.basis[i]];
    res.duals = basis_mat.transpose().partialPivLu().solve(cb);
  }
  return res;
}

LpResult lp_solve_eq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, bool maximize) {
  LpProblem p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.lower = Eigen::VectorXd::Zero(a.cols());
  p.upper = Eigen::VectorXd::Constant(a.cols(), kInf);
  p.maximize = maximize;
  return lp_solve(p);
}

}  // namespace srp
