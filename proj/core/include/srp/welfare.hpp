#pragma once

#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "srp/budget.hpp"
#include "srp/rational_types.hpp"
#include "srp/stochastic.hpp"

namespace srp {

// Patch x_{i|t} is dominant over x_{j|s} iff every bundle of x_{j|s} is
// affordable under budget t while every bundle of x_{i|t} is unaffordable
// under budget s; both facts are read off the sign vectors.
bool patch_dominates(const PatchPartition& partition, int t, int i, int s, int j);

// Row vector over types: entry 1 iff the type's chosen patch at t dominates
// its chosen patch at s.
Eigen::RowVectorXd budget_preference_indicator(const TypeMatrix& types,
                                               const PatchPartition& partition, int t, int s);

struct WelfareBounds {
  double gamma_lower = 0.0;  // min proportion revealed better off under t vs s
  double gamma_upper = 0.0;  // max of the same
  double beta_lower = 0.0;   // min proportion revealed better off under s vs t

  std::pair<double, double> revealed_interval() const { return {gamma_lower, gamma_upper}; }
  std::pair<double, double> better_off_interval() const { return {gamma_lower, 1.0 - beta_lower}; }
};

// Sharp bounds on the proportion of consumers revealed better off under
// budget t than under budget s: three LPs over {nu >= 0 : Gamma nu = rho}.
// Throws NotRationalizableError when the system is infeasible.
WelfareBounds welfare_bounds(const TypeMatrix& types, const PatchPartition& partition,
                             const StochasticChoiceVector& rho, int t, int s);

// Extended system for bounding choices on an unobserved budget: the patch
// partition over the observed budgets plus the counterfactual one, the
// WARP-consistent types over all of them, the aggregation constraints that
// tie refined observed patches back to the observed masses, and the
// counterfactual block Gamma_0.
struct CounterfactualSetup {
  PatchPartition extended;
  TypeMatrix types;
  Eigen::MatrixXd constraints;  // one row per observed coarse patch
  Eigen::VectorXd rhs;          // observed rho in coarse row order
  Eigen::MatrixXd gamma0;       // counterfactual patch rows over the same columns
  int cf_budget = 0;            // index of the counterfactual budget in `extended`
  bool duplicate = false;       // counterfactual prices coincide with an observed budget
};

// Observed patch masses are never split across refined sub-patches; the
// refined rows are aggregated back to the coarse patches instead, which keeps
// the bounds sharp without inventing unobserved splits. A counterfactual
// budget duplicating an observed one reuses that budget's patches directly.
CounterfactualSetup counterfactual_setup(const PatchPartition& observed,
                                         const StochasticChoiceVector& rho,
                                         const Eigen::VectorXd& p0, double w0,
                                         std::uint64_t column_cap = kDefaultColumnCap);

// Bounds on E[h(y)] for the linear functional h(y) = h_coeffs . y, via
// per-patch extremes and the two LPs of the extended system.
std::pair<double, double> counterfactual_expectation_bounds(const CounterfactualSetup& setup,
                                                            const Eigen::VectorXd& h_coeffs);

// Bounds on the probability that counterfactual demand lands in patch i.
std::pair<double, double> counterfactual_patch_probability_bounds(const CounterfactualSetup& setup,
                                                                  int i);

}  // namespace srp
