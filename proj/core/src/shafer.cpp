#include "srp/shafer.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "srp/errors.hpp"
#include "srp/rng.hpp"

namespace srp {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie strictly inside (0, 1)");
  }
}

void check_point(const Eigen::Vector3d& v, const char* name) {
  if (!(v[0] > 0.0)) {
    throw DomainError(std::string(name) + ": first component must be positive");
  }
  if (v[1] < 0.0) {
    throw DomainError(std::string(name) + ": second component must be nonnegative");
  }
  if (!(v[2] > 0.0)) {
    throw DomainError(std::string(name) + ": third component must be positive");
  }
}

std::uint64_t mix_streams(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL);
  return splitmix64(s);
}

}  // namespace

double shafer_value(double alpha, const Eigen::Vector3d& x, const Eigen::Vector3d& y) {
  check_alpha(alpha);
  check_point(x, "x");
  check_point(y, "y");
  return std::pow(x[1], alpha) * std::pow(y[0], alpha - 1.0) + std::log(x[2]) -
         std::pow(y[1], alpha) * std::pow(x[0], alpha - 1.0) - std::log(y[2]);
}

Eigen::Vector3d shafer_demand(double alpha, const Eigen::Vector3d& prices, double wealth) {
  check_alpha(alpha);
  if ((prices.array() <= 0.0).any() || !(wealth > 0.0)) {
    throw DomainError("shafer_demand: prices and wealth must be positive");
  }
  const double p1 = prices[0];
  const double p2 = prices[1];
  const double p3 = prices[2];

  // From r2/r1 = p2/p1: y2 = c*y1 with c = [alpha/(1-alpha)]*(p1/p2).
  // From r3/r1 = p3/p1: p3*y3 = b*y1^q with q = 2-2*alpha.
  // Budget then reads a*y1 + b*y1^q = w: strictly increasing in y1.
  const double c = alpha / (1.0 - alpha) * p1 / p2;
  const double a = p1 + p2 * c;
  const double b = p1 / ((1.0 - alpha) * std::pow(c, alpha));
  const double q = 2.0 - 2.0 * alpha;

  double lo = 0.0;
  double hi = wealth / a;
  double z = wealth / (a + b);  // starting guess inside the bracket
  for (int iter = 0; iter < 200; ++iter) {
    const double f = a * z + b * std::pow(z, q) - wealth;
    if (f > 0.0) {
      hi = z;
    } else {
      lo = z;
    }
    const double df = a + q * b * std::pow(z, q - 1.0);
    double next = z - f / df;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 1e-16 * std::max(1.0, z)) {
      z = next;
      break;
    }
    z = next;
  }

  Eigen::Vector3d y;
  y[0] = z;
  y[1] = c * z;
  y[2] = b * std::pow(z, q) / p3;

  // verify the first-order conditions before handing the bundle out
  const double r1 = (1.0 - alpha) * std::pow(y[1], alpha) * std::pow(y[0], alpha - 2.0);
  const double r2 = alpha * std::pow(y[1], alpha - 1.0) * std::pow(y[0], alpha - 1.0);
  const double r3 = 1.0 / y[2];
  const double budget_gap = std::abs(prices.dot(y) - wealth) / wealth;
  const double foc2 = std::abs(r2 / r1 - p2 / p1) / (p2 / p1);
  const double foc3 = std::abs(r3 / r1 - p3 / p1) / (p3 / p1);
  if (budget_gap > 1e-10 || foc2 > 1e-10 || foc3 > 1e-10) {
    throw SolverError("shafer_demand: first-order conditions not met to tolerance");
  }
  return y;
}

std::vector<Observation> simulate_population(const std::vector<Budget>& budgets,
                                             long n_per_period,
                                             const AlphaDistribution& alpha_distribution,
                                             std::uint64_t seed) {
  if (budgets.empty()) throw ValidationError("simulate_population: no budgets");
  if (n_per_period < 1) throw ValidationError("simulate_population: n_per_period must be >= 1");
  for (const Budget& b : budgets) {
    if (b.prices.size() != 3) {
      throw ValidationError("simulate_population: the preference function needs three goods");
    }
  }
  if (alpha_distribution.kind == AlphaDistribution::Kind::Fixed) check_alpha(alpha_distribution.value);

  std::vector<Observation> out;
  out.reserve(budgets.size() * static_cast<std::size_t>(n_per_period));
  for (std::size_t t = 0; t < budgets.size(); ++t) {
    Rng rng(seed, static_cast<std::uint64_t>(t) + 1);
    const Eigen::Vector3d prices = budgets[t].prices;
    for (long k = 0; k < n_per_period; ++k) {
      double alpha;
      if (alpha_distribution.kind == AlphaDistribution::Kind::Fixed) {
        alpha = alpha_distribution.value;
      } else {
        do {
          alpha = rng.uniform01();
        } while (alpha <= 0.0 || alpha >= 1.0);
      }
      out.push_back({budgets[t].period, shafer_demand(alpha, prices, budgets[t].expenditure)});
    }
  }
  return out;
}

PowerStudyResult monte_carlo_power(const PowerStudyConfig& config) {
  if (config.simulations < 1) throw ValidationError("monte_carlo_power: simulations must be >= 1");
  if (config.sample_sizes.empty()) throw ValidationError("monte_carlo_power: no sample sizes");
  if (config.levels.empty()) throw ValidationError("monte_carlo_power: no significance levels");
  for (double level : config.levels) {
    if (!(level > 0.0 && level < 1.0)) {
      throw ValidationError("monte_carlo_power: levels must lie in (0, 1)");
    }
  }
  int total = 0;
  for (int size : config.block_sizes) total += size;
  if (config.rho_true.size() != total || config.gamma.rows() != total) {
    throw ValidationError("monte_carlo_power: rho_true/gamma do not match the block sizes");
  }

  // normalize each block exactly; fixture tables carry rounded entries
  Eigen::VectorXd rho = config.rho_true;
  {
    int off = 0;
    for (int size : config.block_sizes) {
      const double sum = rho.segment(off, size).sum();
      if (std::abs(sum - 1.0) > 1e-3) {
        throw ValidationError("monte_carlo_power: a rho_true block is far from summing to one");
      }
      rho.segment(off, size) /= sum;
      off += size;
    }
  }

  const int num_budgets = static_cast<int>(config.block_sizes.size());
  PowerStudyResult result;
  result.sample_sizes = config.sample_sizes;
  result.levels = config.levels;

  for (std::size_t size_idx = 0; size_idx < config.sample_sizes.size(); ++size_idx) {
    const long n = config.sample_sizes[size_idx];
    if (n < 1) throw ValidationError("monte_carlo_power: sample sizes must be >= 1");

    std::vector<double> p_values(static_cast<std::size_t>(config.simulations));
    std::vector<double> j_values(static_cast<std::size_t>(config.simulations));

    auto run_sims = [&](int begin, int end) {
      for (int m = begin; m < end; ++m) {
        Rng rng(config.seed, mix_streams(size_idx + 1, static_cast<std::uint64_t>(m) + 1));
        StochasticChoiceVector sample;
        sample.block_sizes = config.block_sizes;
        sample.counts.assign(static_cast<std::size_t>(num_budgets), n);
        sample.probs.resize(total);
        Eigen::VectorXi draw;
        int off = 0;
        for (int t = 0; t < num_budgets; ++t) {
          const int size = config.block_sizes[static_cast<std::size_t>(t)];
          multinomial_counts(rng, n, rho.segment(off, size), draw);
          sample.probs.segment(off, size) = draw.cast<double>() / static_cast<double>(n);
          off += size;
        }
        BootstrapConfig boot;
        boot.replications = config.bootstrap_replications;
        boot.seed = mix_streams(config.seed, (size_idx << 24) ^ static_cast<std::uint64_t>(m));
        boot.feas_tol = config.feas_tol;
        boot.threads = 1;  // parallelism lives at the simulation level
        const TestReport report = bootstrap_test(config.gamma, sample, boot);
        p_values[static_cast<std::size_t>(m)] = report.p_value;
        j_values[static_cast<std::size_t>(m)] = report.j_n;
      }
    };

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, config.simulations));
    if (threads == 1) {
      run_sims(0, config.simulations);
    } else {
      std::vector<std::thread> pool;
      const int chunk = (config.simulations + threads - 1) / threads;
      for (int w = 0; w < threads; ++w) {
        const int begin = w * chunk;
        const int end = std::min(config.simulations, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(run_sims, begin, end);
      }
      for (auto& th : pool) th.join();
    }

    std::vector<double> rejections;
    for (double level : config.levels) {
      long rejected = 0;
      for (double p : p_values) {
        if (p <= level) ++rejected;
      }
      rejections.push_back(static_cast<double>(rejected) / config.simulations);
    }
    result.rejections.push_back(std::move(rejections));
    double mean_j = 0.0;
    for (double j : j_values) mean_j += j;
    result.mean_jn.push_back(mean_j / config.simulations);
  }
  return result;
}

}  // namespace srp
