#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace srp {

// Prices and total expenditure defining one linear budget hyperplane.
struct Budget {
  Eigen::VectorXd prices;   // strictly positive, length L >= 2
  double expenditure = 0.0; // strictly positive
  int period = 0;
};

// prices / expenditure; the implied expenditure is 1.
struct NormalizedBudget {
  Eigen::VectorXd prices;
  int period = 0;
};

std::vector<NormalizedBudget> normalize_budgets(const std::vector<Budget>& budgets);

enum class Side : std::uint8_t { Below, Above };

// One maximal region of a budget hyperplane with constant position relative
// to every other budget. `sides[s]` is meaningful for s != owner and records
// whether the region satisfies p_s.y < 1 (Below) or > 1 (Above).
struct Patch {
  int owner = 0;
  int local_index = 0;
  std::vector<Side> sides;

  Side side_wrt(int other) const { return sides[static_cast<std::size_t>(other)]; }
};

// The coarsest partition of the union of budget hyperplanes into patches,
// intersection regions excluded. Patch order within a budget is lexicographic
// in the sign vector over ascending other-budget index with Below < Above;
// the global row order is budget-major.
class PatchPartition {
 public:
  PatchPartition() = default;
  PatchPartition(std::vector<NormalizedBudget> budgets,
                 std::vector<std::vector<Patch>> patches);

  int num_budgets() const { return static_cast<int>(budgets_.size()); }
  int dimension() const { return budgets_.empty() ? 0 : static_cast<int>(budgets_[0].prices.size()); }
  const std::vector<NormalizedBudget>& budgets() const { return budgets_; }
  const NormalizedBudget& budget(int t) const { return budgets_[static_cast<std::size_t>(t)]; }

  int patches_in(int t) const { return static_cast<int>(patches_[static_cast<std::size_t>(t)].size()); }
  const Patch& patch(int t, int i) const { return patches_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]; }
  const std::vector<Patch>& patches_of(int t) const { return patches_[static_cast<std::size_t>(t)]; }

  int total_patches() const { return row_offsets_.back(); }
  int row_offset(int t) const { return row_offsets_[static_cast<std::size_t>(t)]; }
  int global_row(int t, int i) const { return row_offset(t) + i; }
  std::vector<int> block_sizes() const;

 private:
  std::vector<NormalizedBudget> budgets_;
  std::vector<std::vector<Patch>> patches_;
  std::vector<int> row_offsets_;
};

// Certifies each candidate sign vector with a feasibility LP that maximizes
// the minimum slack of the strict inequalities; regions whose best slack
// falls below `epsilon` are treated as empty (this drops the measure-zero
// intersection sets as well).
PatchPartition compute_patch_partition(const std::vector<NormalizedBudget>& budgets,
                                       double epsilon = 1e-9);

struct ClassifyResult {
  bool on_intersection = false;
  int local_index = -1;  // valid when !on_intersection
};

// Maps a bundle observed on budget t into its patch. Bundles within
// `tie_tolerance` of some other budget hyperplane report OnIntersection.
// Throws OffBudgetError when |p_t.y - 1| > tie_tolerance.
ClassifyResult classify_bundle(const PatchPartition& partition, int t,
                               const Eigen::VectorXd& bundle, double tie_tolerance = 1e-9);

// Infimum and supremum of c.y over the closure of a patch (strict
// inequalities relaxed to weak ones). Patch regions are bounded polytopes,
// so both values are finite.
std::pair<double, double> patch_linear_bounds(const PatchPartition& partition, int t, int i,
                                              const Eigen::VectorXd& c);

struct TriangularWitness {
  std::array<int, 3> triple{};  // budget indices {t, s, k}
  int lhs = 0;                  // which element of the triple sits on the left-hand side
  bool leq = true;              // true: lhs <= combination, false: lhs >= combination
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
};

struct TriangularReport {
  bool is_triangular = false;
  // For a triangular set: a witness for the first triple checked (empty when
  // T < 3 and the condition holds vacuously). Otherwise the violating triple.
  std::optional<TriangularWitness> witness;
  std::optional<std::array<int, 3>> violation;
};

// Checks whether for every three normalized price vectors some permutation
// admits lambda in [0,1] with p_lhs componentwise <= (or >=) the convex
// combination of the other two.
TriangularReport check_triangular_configuration(const std::vector<NormalizedBudget>& budgets);

}  // namespace srp
