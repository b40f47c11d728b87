#include "srp/budget.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "srp/errors.hpp"
#include "srp/lp.hpp"

namespace srp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_budget(const Budget& b) {
  if (b.prices.size() < 2) {
    throw ValidationError("budget for period " + std::to_string(b.period) +
                          " needs at least two goods");
  }
  for (int l = 0; l < b.prices.size(); ++l) {
    if (!(b.prices[l] > 0.0)) {
      throw ValidationError("nonpositive price in period " + std::to_string(b.period) +
                            ", component " + std::to_string(l + 1));
    }
  }
  if (!(b.expenditure > 0.0)) {
    throw ValidationError("nonpositive expenditure in period " + std::to_string(b.period));
  }
}

bool same_prices(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return ((a - b).cwiseAbs().array() <= 1e-9 * (a.cwiseAbs() + b.cwiseAbs()).array()).all();
}

// Max-min-slack LP for one candidate sign vector: maximize delta subject to
// y >= 0, p_t.y = 1, and p_s.y <= 1 - delta (Below) / >= 1 + delta (Above).
double best_slack(const std::vector<NormalizedBudget>& budgets, int t,
                  const std::vector<Side>& sides) {
  const int big_t = static_cast<int>(budgets.size());
  const int dim = static_cast<int>(budgets[0].prices.size());
  const int n = dim + 1;  // bundle + slack variable

  LpProblem p;
  p.a.setZero(big_t, n);
  p.b.setZero(big_t);
  p.rel.assign(static_cast<std::size_t>(big_t), Rel::Eq);
  int row = 0;
  p.a.block(row, 0, 1, dim) = budgets[static_cast<std::size_t>(t)].prices.transpose();
  p.b[row] = 1.0;
  ++row;
  for (int s = 0; s < big_t; ++s) {
    if (s == t) continue;
    p.a.block(row, 0, 1, dim) = budgets[static_cast<std::size_t>(s)].prices.transpose();
    if (sides[static_cast<std::size_t>(s)] == Side::Below) {
      p.a(row, dim) = 1.0;  // p.y + delta <= 1
      p.rel[static_cast<std::size_t>(row)] = Rel::Le;
    } else {
      p.a(row, dim) = -1.0;  // p.y - delta >= 1
      p.rel[static_cast<std::size_t>(row)] = Rel::Ge;
    }
    p.b[row] = 1.0;
    ++row;
  }
  p.c = Eigen::VectorXd::Zero(n);
  p.c[dim] = 1.0;
  p.maximize = true;
  p.lower = Eigen::VectorXd::Zero(n);
  p.lower[dim] = -1.0;
  p.upper = Eigen::VectorXd::Constant(n, kInf);
  p.upper[dim] = 1.0;

  const LpResult r = lp_solve(p);
  if (r.status == LpStatus::Infeasible) return -kInf;
  if (r.status != LpStatus::Optimal) throw SolverError("patch slack LP did not converge");
  return r.objective;
}

}  // namespace

std::vector<NormalizedBudget> normalize_budgets(const std::vector<Budget>& budgets) {
  std::vector<NormalizedBudget> out;
  out.reserve(budgets.size());
  for (const Budget& b : budgets) {
    validate_budget(b);
    out.push_back({b.prices / b.expenditure, b.period});
  }
  return out;
}

PatchPartition::PatchPartition(std::vector<NormalizedBudget> budgets,
                               std::vector<std::vector<Patch>> patches)
    : budgets_(std::move(budgets)), patches_(std::move(patches)) {
  row_offsets_.assign(1, 0);
  for (const auto& per_budget : patches_) {
    row_offsets_.push_back(row_offsets_.back() + static_cast<int>(per_budget.size()));
  }
}

std::vector<int> PatchPartition::block_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(patches_.size());
  for (const auto& per_budget : patches_) sizes.push_back(static_cast<int>(per_budget.size()));
  return sizes;
}

PatchPartition compute_patch_partition(const std::vector<NormalizedBudget>& budgets,
                                       double epsilon) {
  const int big_t = static_cast<int>(budgets.size());
  if (big_t < 1) throw ValidationError("compute_patch_partition: need at least one budget");
  const int dim = static_cast<int>(budgets[0].prices.size());
  for (const auto& b : budgets) {
    if (b.prices.size() != dim) {
      throw ValidationError("compute_patch_partition: mixed price dimensions");
    }
  }
  for (int t = 0; t < big_t; ++t) {
    for (int s = t + 1; s < big_t; ++s) {
      if (same_prices(budgets[static_cast<std::size_t>(t)].prices,
                      budgets[static_cast<std::size_t>(s)].prices)) {
        throw DuplicateBudgetError(budgets[static_cast<std::size_t>(t)].period,
                                   budgets[static_cast<std::size_t>(s)].period);
      }
    }
  }

  std::vector<std::vector<Patch>> patches(static_cast<std::size_t>(big_t));
  for (int t = 0; t < big_t; ++t) {
    std::vector<Side> sides(static_cast<std::size_t>(big_t), Side::Below);
    const int others = big_t - 1;
    // lexicographic over ascending other-budget index, Below < Above
    for (std::uint64_t mask = 0; mask < (1ULL << others); ++mask) {
      int bit = others - 1;
      for (int s = 0; s < big_t; ++s) {
        if (s == t) continue;
        sides[static_cast<std::size_t>(s)] =
            ((mask >> bit) & 1ULL) ? Side::Above : Side::Below;
        --bit;
      }
      if (best_slack(budgets, t, sides) >= epsilon) {
        Patch patch;
        patch.owner = t;
        patch.local_index = static_cast<int>(patches[static_cast<std::size_t>(t)].size());
        patch.sides = sides;
        patches[static_cast<std::size_t>(t)].push_back(std::move(patch));
      }
    }
  }
  return PatchPartition(budgets, std::move(patches));
}

ClassifyResult classify_bundle(const PatchPartition& partition, int t,
                               const Eigen::VectorXd& bundle, double tie_tolerance) {
  if (t < 0 || t >= partition.num_budgets()) {
    throw ValidationError("classify_bundle: budget index out of range");
  }
  if ((bundle.array() < 0.0).any()) {
    throw ValidationError("classify_bundle: bundle must be nonnegative");
  }
  const double own = partition.budget(t).prices.dot(bundle);
  if (std::abs(own - 1.0) > tie_tolerance) {
    throw OffBudgetError(partition.budget(t).period, std::abs(own - 1.0));
  }

  const int big_t = partition.num_budgets();
  std::vector<Side> sides(static_cast<std::size_t>(big_t), Side::Below);
  for (int s = 0; s < big_t; ++s) {
    if (s == t) continue;
    const double v = partition.budget(s).prices.dot(bundle);
    if (std::abs(v - 1.0) <= tie_tolerance) return {true, -1};
    sides[static_cast<std::size_t>(s)] = (v < 1.0) ? Side::Below : Side::Above;
  }
  for (const Patch& patch : partition.patches_of(t)) {
    if (patch.sides == sides) return {false, patch.local_index};
  }
  // The sign vector exists geometrically but was certified empty at
  // construction; with a consistent epsilon this cannot happen away from
  // intersections, so treat it as a tie.
  return {true, -1};
}

std::pair<double, double> patch_linear_bounds(const PatchPartition& partition, int t, int i,
                                              const Eigen::VectorXd& c) {
  if (t < 0 || t >= partition.num_budgets() || i < 0 || i >= partition.patches_in(t)) {
    throw ValidationError("patch_linear_bounds: patch out of range");
  }
  if (c.size() != partition.dimension()) {
    throw ValidationError("patch_linear_bounds: objective dimension mismatch");
  }
  const Patch& patch = partition.patch(t, i);
  const int big_t = partition.num_budgets();
  const int dim = partition.dimension();

  LpProblem p;
  p.a.setZero(big_t, dim);
  p.b.setOnes(big_t);
  p.rel.assign(static_cast<std::size_t>(big_t), Rel::Eq);
  int row = 0;
  p.a.row(row) = partition.budget(t).prices.transpose();
  ++row;
  for (int s = 0; s < big_t; ++s) {
    if (s == t) continue;
    p.a.row(row) = partition.budget(s).prices.transpose();
    p.rel[static_cast<std::size_t>(row)] =
        (patch.side_wrt(s) == Side::Below) ? Rel::Le : Rel::Ge;
    ++row;
  }
  p.c = c;
  p.lower = Eigen::VectorXd::Zero(dim);
  p.upper = Eigen::VectorXd::Constant(dim, kInf);

  p.maximize = false;
  const LpResult lo = lp_solve(p);
  p.maximize = true;
  const LpResult hi = lp_solve(p);
  if (lo.status != LpStatus::Optimal || hi.status != LpStatus::Optimal) {
    throw SolverError("patch_linear_bounds: LP did not converge");
  }
  return {lo.objective, hi.objective};
}

TriangularReport check_triangular_configuration(const std::vector<NormalizedBudget>& budgets) {
  TriangularReport report;
  const int big_t = static_cast<int>(budgets.size());
  if (big_t < 3) {
    report.is_triangular = true;
    return report;
  }
  const int dim = static_cast<int>(budgets[0].prices.size());

  auto lambda_interval = [&](int lhs, int mid, int rhs, bool leq) -> std::pair<double, double> {
    // componentwise: p_lhs <= lambda p_mid + (1-lambda) p_rhs   (or >=)
    double lo = 0.0;
    double hi = 1.0;
    for (int l = 0; l < dim; ++l) {
      const double a = budgets[static_cast<std::size_t>(mid)].prices[l] -
                       budgets[static_cast<std::size_t>(rhs)].prices[l];
      const double b = budgets[static_cast<std::size_t>(lhs)].prices[l] -
                       budgets[static_cast<std::size_t>(rhs)].prices[l];
      // leq: lambda * a >= b ; geq: lambda * a <= b
      const double tol = 1e-12 * (1.0 + std::abs(b));
      if (std::abs(a) <= tol) {
        const bool ok = leq ? (b <= tol) : (b >= -tol);
        if (!ok) return {1.0, 0.0};
        continue;
      }
      double bound = b / a;
      const bool lower_bounded = leq ? (a > 0.0) : (a < 0.0);
      if (lower_bounded) {
        lo = std::max(lo, bound);
      } else {
        hi = std::min(hi, bound);
      }
    }
    return {lo, hi};
  };

  const double eps = 1e-12;
  for (int t = 0; t < big_t; ++t) {
    for (int s = t + 1; s < big_t; ++s) {
      for (int k = s + 1; k < big_t; ++k) {
        const std::array<int, 3> triple{t, s, k};
        bool found = false;
        for (int lhs_pos = 0; lhs_pos < 3 && !found; ++lhs_pos) {
          const int lhs = triple[static_cast<std::size_t>(lhs_pos)];
          const int mid = triple[static_cast<std::size_t>((lhs_pos + 1) % 3)];
          const int rhs = triple[static_cast<std::size_t>((lhs_pos + 2) % 3)];
          for (bool leq : {true, false}) {
            const auto [lo, hi] = lambda_interval(lhs, mid, rhs, leq);
            if (lo <= hi + eps) {
              found = true;
              if (!report.witness) {
                report.witness = TriangularWitness{triple, lhs, leq, lo, std::max(lo, hi)};
              }
              break;
            }
          }
        }
        if (!found) {
          report.is_triangular = false;
          report.violation = triple;
          report.witness.reset();
          return report;
        }
      }
    }
  }
  report.is_triangular = true;
  return report;
}

}  // namespace srp
