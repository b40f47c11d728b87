#pragma once

#include <vector>

#include <Eigen/Dense>

namespace srp {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

enum class Rel { Eq, Le, Ge };

// minimize (or maximize) c'x  subject to  A x (rel) b,  lower <= x <= upper.
//
// Bounds may be +-infinity, but every variable must keep at least one finite
// bound; the dense two-phase simplex below starts nonbasic variables on a
// finite bound. All uses in this library are bounded polytopes.
struct LpProblem {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::vector<Rel> rel;  // one per row; empty means all equalities
  Eigen::VectorXd c;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  bool maximize = false;
};

struct LpResult {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;   // in the caller's sense (max problems not negated)
  Eigen::VectorXd x;
  // Dual prices y = B^{-T} c_B of the final basis, reported for the internal
  // minimize orientation (negate for maximize problems). Empty unless the
  // status is Optimal.
  Eigen::VectorXd duals;
  // Phase-1 dual prices at an infeasible optimum. For a pure equality system
  // with variables bounded below by zero this is a Farkas vector:
  // y'A <= 0 componentwise and y'b > 0. Callers must validate before relying
  // on it.
  Eigen::VectorXd farkas;
};

LpResult lp_solve(const LpProblem& problem);

// Convenience wrapper for the common "A x = b, x >= 0" shape.
LpResult lp_solve_eq(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                     const Eigen::VectorXd& c, bool maximize = false);

}  // namespace srp
