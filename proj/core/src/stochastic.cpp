#include "srp/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

int StochasticChoiceVector::block_offset(int t) const {
  int off = 0;
  for (int b = 0; b < t; ++b) off += block_sizes[static_cast<std::size_t>(b)];
  return off;
}

Eigen::VectorXd StochasticChoiceVector::block(int t) const {
  return probs.segment(block_offset(t), block_sizes[static_cast<std::size_t>(t)]);
}

void StochasticChoiceVector::validate() const {
  if (block_sizes.size() != counts.size()) {
    throw ValidationError("stochastic choice vector: block/count size mismatch");
  }
  int total = 0;
  for (int size : block_sizes) total += size;
  if (probs.size() != total) {
    throw ValidationError("stochastic choice vector: probability length mismatch");
  }
  if ((probs.array() < 0.0).any()) {
    throw ValidationError("stochastic choice vector: negative probability");
  }
  for (int t = 0; t < num_budgets(); ++t) {
    if (std::abs(block(t).sum() - 1.0) > 1e-12) {
      throw ValidationError("stochastic choice vector: block " + std::to_string(t) +
                            " does not sum to one");
    }
  }
}

namespace {

// classify with the tie policy applied; returns -1 to drop the observation
int classify_with_policy(const PatchPartition& partition, int t, const Eigen::VectorXd& bundle,
                         TiePolicy policy, double tie_tolerance) {
  const ClassifyResult r = classify_bundle(partition, t, bundle, tie_tolerance);
  if (!r.on_intersection) return r.local_index;
  switch (policy) {
    case TiePolicy::Error:
      throw ValidationError("observation on budget " +
                            std::to_string(partition.budget(t).period) +
                            " lies on an intersection; rerun with a tie policy");
    case TiePolicy::Drop:
      return -1;
    case TiePolicy::AssignBelow: {
      std::vector<Side> sides(static_cast<std::size_t>(partition.num_budgets()), Side::Below);
      for (int s = 0; s < partition.num_budgets(); ++s) {
        if (s == t) continue;
        const double v = partition.budget(s).prices.dot(bundle);
        sides[static_cast<std::size_t>(s)] =
            (v < 1.0 + tie_tolerance) ? Side::Below : Side::Above;
      }
      for (const Patch& patch : partition.patches_of(t)) {
        if (patch.sides == sides) return patch.local_index;
      }
      throw ValidationError("tie resolution selected an empty patch on budget " +
                            std::to_string(partition.budget(t).period));
    }
  }
  return -1;
}

}  // namespace

StochasticChoiceVector estimate_rho(const std::vector<Observation>& observations,
                                    const PatchPartition& partition, TiePolicy policy,
                                    double tie_tolerance) {
  const int big_t = partition.num_budgets();
  std::vector<long> patch_counts(static_cast<std::size_t>(partition.total_patches()), 0);
  std::vector<long> budget_counts(static_cast<std::size_t>(big_t), 0);

  for (const Observation& obs : observations) {
    int t = -1;
    for (int b = 0; b < big_t; ++b) {
      if (partition.budget(b).period == obs.period) {
        t = b;
        break;
      }
    }
    if (t < 0) {
      throw ValidationError("observation references unknown period " +
                            std::to_string(obs.period));
    }
    const int i = classify_with_policy(partition, t, obs.bundle, policy, tie_tolerance);
    if (i < 0) continue;  // dropped tie
    ++patch_counts[static_cast<std::size_t>(partition.global_row(t, i))];
    ++budget_counts[static_cast<std::size_t>(t)];
  }

  StochasticChoiceVector rho;
  rho.block_sizes = partition.block_sizes();
  rho.counts = budget_counts;
  rho.probs.resize(partition.total_patches());
  for (int t = 0; t < big_t; ++t) {
    if (budget_counts[static_cast<std::size_t>(t)] == 0) {
      throw ValidationError("no observations on budget for period " +
                            std::to_string(partition.budget(t).period));
    }
    for (int i = 0; i < partition.patches_in(t); ++i) {
      const int row = partition.global_row(t, i);
      rho.probs[row] = static_cast<double>(patch_counts[static_cast<std::size_t>(row)]) /
                       static_cast<double>(budget_counts[static_cast<std::size_t>(t)]);
    }
  }
  return rho;
}

std::pair<double, ConeFitResult> jn_statistic(const Eigen::MatrixXd& gamma,
                                              const StochasticChoiceVector& rho,
                                              double feas_tol) {
  if (gamma.rows() != rho.probs.size()) {
    throw ValidationError("jn_statistic: gamma rows must match rho length");
  }
  ConeFitResult fit = nnls(gamma, rho.probs);
  const long n = *std::min_element(rho.counts.begin(), rho.counts.end());
  const double j =
      (std::sqrt(fit.squared_residual) <= feas_tol) ? 0.0 : n * fit.squared_residual;
  return {j, std::move(fit)};
}

TestReport bootstrap_test(const TypeMatrix& types, const StochasticChoiceVector& rho,
                          const BootstrapConfig& config) {
  if (rho.block_sizes != types.patches_per_budget()) {
    throw ValidationError("bootstrap_test: rho blocks do not match the type matrix");
  }
  return bootstrap_test(types.dense(), rho, config, types.axiom());
}

TestReport bootstrap_test(const Eigen::MatrixXd& gamma, const StochasticChoiceVector& rho,
                          const BootstrapConfig& config, Axiom axiom_tag) {
  rho.validate();
  if (config.replications < 1) throw ValidationError("bootstrap_test: R must be >= 1");
  if (gamma.rows() != rho.probs.size()) {
    throw ValidationError("bootstrap_test: gamma rows do not match rho");
  }
  for (long c : rho.counts) {
    if (c <= 0) throw ValidationError("bootstrap_test: all budget counts must be positive");
  }

  const long n = *std::min_element(rho.counts.begin(), rho.counts.end());
  const double tau = std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(n));
  const auto h = gamma.cols();
  if (tau > 1.0 + 1e-12) {
    throw ValidationError("bootstrap_test: tightening exceeds the simplex mass");
  }

  TestReport report;
  report.axiom = axiom_tag;
  report.seed = config.seed;
  report.feas_tol = config.feas_tol;
  report.counts = rho.counts;
  report.replications = config.replications;
  report.d_rho = static_cast<int>(gamma.rows());
  report.num_types = gamma.cols();
  report.tau_n = tau;

  auto [j_n, fit] = jn_statistic(gamma, rho, config.feas_tol);
  report.j_n = j_n;
  report.nu_hat = fit.nu;
  report.eta_hat = fit.eta;

  const double lower = tau / static_cast<double>(h);
  const ConeFitResult tight = nnls(gamma, rho.probs, lower);
  report.eta_tightened = tight.eta;

  const int big_t = rho.num_budgets();
  const Eigen::VectorXd recenter = report.eta_tightened - rho.probs;

  report.bootstrap_stats.assign(static_cast<std::size_t>(config.replications), 0.0);
  int threads = config.threads > 0 ? config.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, config.replications));

  auto run_range = [&](int begin, int end) {
    NnlsWorkspace workspace;
    Eigen::VectorXd target(rho.probs.size());
    Eigen::VectorXi draw;
    for (int r = begin; r < end; ++r) {
      // substream keyed by the replication index: thread layout cannot
      // change the draws
      Rng rng(config.seed, static_cast<std::uint64_t>(r) + 1);
      for (int t = 0; t < big_t; ++t) {
        const int off = rho.block_offset(t);
        const int size = rho.block_sizes[static_cast<std::size_t>(t)];
        multinomial_counts(rng, rho.counts[static_cast<std::size_t>(t)],
                           rho.probs.segment(off, size), draw);
        target.segment(off, size) =
            draw.cast<double>() / static_cast<double>(rho.counts[static_cast<std::size_t>(t)]);
      }
      target += recenter;
      const ConeFitResult boot = nnls(gamma, target, lower, {}, &workspace);
      report.bootstrap_stats[static_cast<std::size_t>(r)] = n * boot.squared_residual;
    }
  };

  if (threads == 1) {
    run_range(0, config.replications);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const int chunk = (config.replications + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
      const int begin = w * chunk;
      const int end = std::min(config.replications, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  long exceed = 0;
  for (double j_star : report.bootstrap_stats) {
    if (j_star >= report.j_n) ++exceed;
  }
  report.p_value = static_cast<double>(1 + exceed) / static_cast<double>(config.replications + 1);
  return report;
}

double bonferroni_adjust(double p_value, int num_tests) {
  if (num_tests < 1) throw ValidationError("bonferroni_adjust: need at least one test");
  return std::min(1.0, p_value * num_tests);
}

std::vector<PairwiseTestResult> pairwise_rationality_test(const StochasticChoiceVector& rho,
                                                          const PatchPartition& partition,
                                                          double feas_tol) {
  rho.validate();
  const int big_t = partition.num_budgets();
  if (big_t < 2) throw ValidationError("pairwise_rationality_test: need at least two budgets");

  std::vector<PairwiseTestResult> results;
  for (int t = 0; t < big_t; ++t) {
    for (int s = t + 1; s < big_t; ++s) {
      const TypeMatrix pair_types = pairwise_type_matrix(partition, t, s);
      PairwiseTestResult res;
      res.t = t;
      res.s = s;
      if (pair_types.rows() == 2) {
        // nested budgets: both groups carry full mass, u is the pair (1, ...)
        res.rho_ts = Eigen::Vector2d(1.0, 1.0);
        res.u = Eigen::VectorXd::Ones(1);
        res.feasible = true;
      } else {
        Eigen::VectorXd grouped(4);
        grouped.setZero();
        for (int i = 0; i < partition.patches_in(t); ++i) {
          const int g = partition.patch(t, i).side_wrt(s) == Side::Below ? 0 : 1;
          grouped[g] += rho.probs[partition.global_row(t, i)];
        }
        for (int i = 0; i < partition.patches_in(s); ++i) {
          const int g = partition.patch(s, i).side_wrt(t) == Side::Below ? 2 : 3;
          grouped[g] += rho.probs[partition.global_row(s, i)];
        }
        res.rho_ts = grouped;
        const FeasibilityResult feas = feasibility(pair_types.dense(), grouped, feas_tol);
        res.feasible = feas.feasible;
        if (feas.feasible) res.u = feas.nu;
      }
      results.push_back(std::move(res));
    }
  }
  return results;
}

}  // namespace srp
