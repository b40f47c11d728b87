#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "srp/budget.hpp"
#include "srp/stochastic.hpp"

namespace srp {

// Skew-symmetric nontransitive preference function over three goods,
//   r(x, y) = (x2)^a (y1)^(a-1) + ln x3 - (y2)^a (x1)^(a-1) - ln y3,
// with parameter a in (0,1). First components must be positive where the
// negative exponent applies; third components always.
double shafer_value(double alpha, const Eigen::Vector3d& x, const Eigen::Vector3d& y);

// The preference-maximizing bundle at given prices and wealth, from the
// first-order conditions r_l(y,y)/r_1(y,y) = p_l/p_1 with a binding budget.
// The system reduces to one monotone scalar equation in y1; all residuals are
// verified to 1e-10 before returning.
Eigen::Vector3d shafer_demand(double alpha, const Eigen::Vector3d& prices, double wealth);

struct AlphaDistribution {
  enum class Kind { Uniform, Fixed };
  Kind kind = Kind::Uniform;
  double value = 0.5;  // used by Fixed

  static AlphaDistribution uniform() { return {Kind::Uniform, 0.0}; }
  static AlphaDistribution fixed(double v) { return {Kind::Fixed, v}; }
};

// Repeated cross-section: fresh households each period, each drawing its own
// alpha and demanding via shafer_demand. Deterministic under the seed.
std::vector<Observation> simulate_population(const std::vector<Budget>& budgets,
                                             long n_per_period,
                                             const AlphaDistribution& alpha_distribution,
                                             std::uint64_t seed);

struct PowerStudyConfig {
  Eigen::MatrixXd gamma;
  Eigen::VectorXd rho_true;        // per-budget blocks, each summing to one
  std::vector<int> block_sizes;
  std::vector<long> sample_sizes;  // N_t, identical across budgets
  int simulations = 99;
  int bootstrap_replications = 200;
  std::vector<double> levels = {0.05, 0.01};
  std::uint64_t seed = 0;
  double feas_tol = 1e-8;
  int threads = 0;
};

struct PowerStudyResult {
  std::vector<long> sample_sizes;
  std::vector<double> levels;
  // rejections[i][j]: proportion of simulations with p <= levels[j] at
  // sample_sizes[i]
  std::vector<std::vector<double>> rejections;
  std::vector<double> mean_jn;  // per sample size
};

// Draws per-budget multinomial samples of each size from rho_true, runs the
// bootstrap test on every simulated dataset, and reports rejection
// proportions per (sample size, level).
PowerStudyResult monte_carlo_power(const PowerStudyConfig& config);

}  // namespace srp
