#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "srp/budget.hpp"
#include "srp/cone.hpp"
#include "srp/rational_types.hpp"

namespace srp {

// One micro-data row: a household observed on budget `period` chose `bundle`.
struct Observation {
  int period = 0;
  Eigen::VectorXd bundle;
};

// Per-budget probability blocks over that budget's patches, concatenated in
// the partition's global row order, plus the per-budget sample counts.
struct StochasticChoiceVector {
  Eigen::VectorXd probs;
  std::vector<int> block_sizes;
  std::vector<long> counts;

  int num_budgets() const { return static_cast<int>(block_sizes.size()); }
  int block_offset(int t) const;
  Eigen::VectorXd block(int t) const;
  void validate() const;  // entries >= 0, each block sums to 1 within 1e-12
};

enum class TiePolicy { Error, Drop, AssignBelow };

// Sample choice frequencies per budget. Observations landing within the tie
// tolerance of another budget's hyperplane follow the tie policy.
StochasticChoiceVector estimate_rho(const std::vector<Observation>& observations,
                                    const PatchPartition& partition,
                                    TiePolicy policy = TiePolicy::Error,
                                    double tie_tolerance = 1e-9);

// J_N = N * min_{eta in cone} ||rho_hat - eta||^2 with N = min_t N_t; reports
// an exact zero when the residual norm is below feas_tol.
std::pair<double, ConeFitResult> jn_statistic(const Eigen::MatrixXd& gamma,
                                              const StochasticChoiceVector& rho,
                                              double feas_tol = 1e-8);

struct BootstrapConfig {
  int replications = 1000;
  std::uint64_t seed = 0;
  double feas_tol = 1e-8;
  int threads = 0;  // 0: hardware concurrency
};

struct TestReport {
  Axiom axiom = Axiom::Warp;
  double j_n = 0.0;
  double tau_n = 0.0;
  double p_value = 1.0;
  int replications = 0;
  std::vector<double> bootstrap_stats;  // J*^(r), r = 1..R
  Eigen::VectorXd nu_hat;               // unrestricted cone fit
  Eigen::VectorXd eta_hat;
  Eigen::VectorXd eta_tightened;        // tau_N-tightened restricted estimator
  std::uint64_t seed = 0;
  double feas_tol = 0.0;
  std::vector<long> counts;
  int d_rho = 0;
  std::int64_t num_types = 0;
};

// The tau_N-tightened bootstrap: eta_hat_tau from the fit with weights
// bounded below by tau_N/H, per-budget multinomial resampling of rho_hat, and
// recentered bootstrap statistics
//   J*^(r) = N * min_{nu >= tau_N/H} ||rho*^(r) - rho_hat + eta_hat_tau - Gamma nu||^2.
// The p-value uses the add-one convention (1 + #{J* >= J_N}) / (R + 1).
// Identical (inputs, seed, R) produce identical reports regardless of the
// thread count.
TestReport bootstrap_test(const TypeMatrix& types, const StochasticChoiceVector& rho,
                          const BootstrapConfig& config = {});

// Same procedure for a type matrix already materialized as a dense 0/1
// matrix whose row blocks follow rho's block structure.
TestReport bootstrap_test(const Eigen::MatrixXd& gamma, const StochasticChoiceVector& rho,
                          const BootstrapConfig& config = {}, Axiom axiom_tag = Axiom::Warp);

// Bonferroni adjustment for a report that is one of `num_tests` tests.
double bonferroni_adjust(double p_value, int num_tests);

struct PairwiseTestResult {
  int t = 0;
  int s = 0;
  bool feasible = false;
  Eigen::VectorXd rho_ts;  // aggregated group masses
  Eigen::VectorXd u;       // weights solving the pairwise system, when feasible
};

// The necessary pairwise condition: for every budget pair, the aggregated
// two-budget system must admit a probability vector u with Gamma* u = rho_ts.
std::vector<PairwiseTestResult> pairwise_rationality_test(const StochasticChoiceVector& rho,
                                                          const PatchPartition& partition,
                                                          double feas_tol = 1e-8);

}  // namespace srp
