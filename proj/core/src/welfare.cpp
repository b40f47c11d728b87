#include "srp/welfare.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "srp/errors.hpp"
#include "srp/lp.hpp"

namespace srp {

namespace {

bool same_normalized_prices(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return ((a - b).cwiseAbs().array() <= 1e-9 * (a.cwiseAbs() + b.cwiseAbs()).array()).all();
}

double optimize_over_system(const Eigen::MatrixXd& constraints, const Eigen::VectorXd& rhs,
                            const Eigen::VectorXd& objective, bool maximize) {
  const LpResult r = lp_solve_eq(constraints, rhs, objective, maximize);
  if (r.status == LpStatus::Infeasible) {
    throw NotRationalizableError("the observed choice probabilities are not rationalizable");
  }
  if (r.status != LpStatus::Optimal) throw SolverError("bound LP did not converge");
  return r.objective;
}

}  // namespace

bool patch_dominates(const PatchPartition& partition, int t, int i, int s, int j) {
  if (t == s) throw ValidationError("patch_dominates: budgets must differ");
  const Patch& a = partition.patch(t, i);
  const Patch& b = partition.patch(s, j);
  return b.side_wrt(t) == Side::Below && a.side_wrt(s) == Side::Above;
}

Eigen::RowVectorXd budget_preference_indicator(const TypeMatrix& types,
                                               const PatchPartition& partition, int t, int s) {
  const std::int64_t h = types.columns();
  Eigen::RowVectorXd row(h);
  for (std::int64_t col = 0; col < h; ++col) {
    row[col] = patch_dominates(partition, t, types.choice(col, t), s, types.choice(col, s))
                   ? 1.0
                   : 0.0;
  }
  return row;
}

WelfareBounds welfare_bounds(const TypeMatrix& types, const PatchPartition& partition,
                             const StochasticChoiceVector& rho, int t, int s) {
  rho.validate();
  if (rho.block_sizes != types.patches_per_budget()) {
    throw ValidationError("welfare_bounds: rho blocks do not match the type matrix");
  }
  const Eigen::MatrixXd gamma = types.dense();
  const Eigen::VectorXd gamma_obj = budget_preference_indicator(types, partition, t, s);
  const Eigen::VectorXd beta_obj = budget_preference_indicator(types, partition, s, t);

  WelfareBounds bounds;
  bounds.gamma_lower = optimize_over_system(gamma, rho.probs, gamma_obj, false);
  bounds.gamma_upper = optimize_over_system(gamma, rho.probs, gamma_obj, true);
  bounds.beta_lower = optimize_over_system(gamma, rho.probs, beta_obj, false);
  return bounds;
}

CounterfactualSetup counterfactual_setup(const PatchPartition& observed,
                                         const StochasticChoiceVector& rho,
                                         const Eigen::VectorXd& p0, double w0,
                                         std::uint64_t column_cap) {
  rho.validate();
  if (rho.block_sizes != observed.block_sizes()) {
    throw ValidationError("counterfactual_setup: rho does not match the partition");
  }
  if (p0.size() != observed.dimension()) {
    throw ValidationError("counterfactual_setup: price dimension mismatch");
  }
  if ((p0.array() <= 0.0).any() || !(w0 > 0.0)) {
    throw ValidationError("counterfactual_setup: prices and wealth must be positive");
  }
  const Eigen::VectorXd p0_norm = p0 / w0;

  CounterfactualSetup setup;

  // a duplicated budget forces the same patch choice, so reuse the observed system
  for (int t = 0; t < observed.num_budgets(); ++t) {
    if (same_normalized_prices(p0_norm, observed.budget(t).prices)) {
      setup.duplicate = true;
      setup.cf_budget = t;
      setup.extended = observed;
      setup.types = enumerate_types(observed, Axiom::Warp, column_cap);
      setup.constraints = setup.types.dense();
      setup.rhs = rho.probs;
      setup.gamma0 = setup.constraints.middleRows(observed.row_offset(t), observed.patches_in(t));
      return setup;
    }
  }

  int cf_period = 0;
  for (const NormalizedBudget& b : observed.budgets()) {
    cf_period = std::min(cf_period, b.period - 1);
  }
  std::vector<NormalizedBudget> extended_budgets;
  extended_budgets.push_back({p0_norm, cf_period});
  for (const NormalizedBudget& b : observed.budgets()) extended_budgets.push_back(b);

  setup.cf_budget = 0;
  setup.extended = compute_patch_partition(extended_budgets);
  setup.types = enumerate_types(setup.extended, Axiom::Warp, column_cap);
  const std::int64_t h = setup.types.columns();

  // refined patch -> coarse patch, by dropping the counterfactual component
  // of the sign vector
  std::vector<std::vector<int>> to_coarse(static_cast<std::size_t>(observed.num_budgets()));
  for (int t = 0; t < observed.num_budgets(); ++t) {
    const int t_ext = t + 1;
    auto& mapping = to_coarse[static_cast<std::size_t>(t)];
    mapping.resize(static_cast<std::size_t>(setup.extended.patches_in(t_ext)), -1);
    for (int i = 0; i < setup.extended.patches_in(t_ext); ++i) {
      const Patch& refined = setup.extended.patch(t_ext, i);
      std::vector<Side> restricted(static_cast<std::size_t>(observed.num_budgets()), Side::Below);
      for (int s = 0; s < observed.num_budgets(); ++s) {
        if (s == t) continue;
        restricted[static_cast<std::size_t>(s)] = refined.side_wrt(s + 1);
      }
      for (const Patch& coarse : observed.patches_of(t)) {
        if (coarse.sides == restricted) {
          mapping[static_cast<std::size_t>(i)] = coarse.local_index;
          break;
        }
      }
      if (mapping[static_cast<std::size_t>(i)] < 0) {
        throw SolverError("counterfactual_setup: refined patch has no coarse parent");
      }
    }
  }

  setup.constraints.setZero(observed.total_patches(), h);
  for (std::int64_t col = 0; col < h; ++col) {
    for (int t = 0; t < observed.num_budgets(); ++t) {
      const int coarse = to_coarse[static_cast<std::size_t>(t)][setup.types.choice(col, t + 1)];
      setup.constraints(observed.global_row(t, coarse), col) += 1.0;
    }
  }
  setup.rhs = rho.probs;

  setup.gamma0.setZero(setup.extended.patches_in(0), h);
  for (std::int64_t col = 0; col < h; ++col) {
    setup.gamma0(setup.types.choice(col, 0), col) = 1.0;
  }
  return setup;
}

std::pair<double, double> counterfactual_expectation_bounds(const CounterfactualSetup& setup,
                                                            const Eigen::VectorXd& h_coeffs) {
  const int cf_patches = static_cast<int>(setup.gamma0.rows());
  Eigen::VectorXd h_lo(cf_patches);
  Eigen::VectorXd h_hi(cf_patches);
  for (int i = 0; i < cf_patches; ++i) {
    const auto [lo, hi] = patch_linear_bounds(setup.extended, setup.cf_budget, i, h_coeffs);
    h_lo[i] = lo;
    h_hi[i] = hi;
  }
  const double lower = optimize_over_system(setup.constraints, setup.rhs,
                                            setup.gamma0.transpose() * h_lo, false);
  const double upper = optimize_over_system(setup.constraints, setup.rhs,
                                            setup.gamma0.transpose() * h_hi, true);
  return {lower, upper};
}

std::pair<double, double> counterfactual_patch_probability_bounds(const CounterfactualSetup& setup,
                                                                  int i) {
  if (i < 0 || i >= setup.gamma0.rows()) {
    throw ValidationError("counterfactual patch index out of range");
  }
  const Eigen::VectorXd objective = setup.gamma0.row(i).transpose();
  const double lower = optimize_over_system(setup.constraints, setup.rhs, objective, false);
  const double upper = optimize_over_system(setup.constraints, setup.rhs, objective, true);
  return {lower, upper};
}

}  // namespace srp
