#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "srp/axioms.hpp"
#include "srp/budget.hpp"

namespace srp {

// Binary matrix of axiom-consistent choice types: rows are patches in the
// partition's global row order, columns are types. Stored compactly as one
// patch index per (budget, column); each column therefore has exactly one 1
// inside every budget's row block by construction.
class TypeMatrix {
 public:
  TypeMatrix() = default;
  TypeMatrix(Axiom axiom, std::vector<int> patches_per_budget);

  Axiom axiom() const { return axiom_; }
  int num_budgets() const { return static_cast<int>(patches_per_budget_.size()); }
  const std::vector<int>& patches_per_budget() const { return patches_per_budget_; }
  int rows() const { return row_offsets_.back(); }
  std::int64_t columns() const {
    return num_budgets() == 0 ? 0 : static_cast<std::int64_t>(choices_.size()) / num_budgets();
  }
  int row_offset(int t) const { return row_offsets_[static_cast<std::size_t>(t)]; }

  void append_column(std::span<const std::uint16_t> choice);
  std::uint16_t choice(std::int64_t column, int t) const {
    return choices_[static_cast<std::size_t>(column) * num_budgets() + t];
  }
  bool entry(int row, std::int64_t column) const;

  Eigen::MatrixXd dense() const;

  // Rows keyed by (budget, local index), columns sorted lexicographically;
  // two matrices over the same partition are equal as sets of types iff their
  // canonical forms agree.
  TypeMatrix canonical() const;

 private:
  Axiom axiom_ = Axiom::Warp;
  std::vector<int> patches_per_budget_;
  std::vector<int> row_offsets_;
  std::vector<std::uint16_t> choices_;  // column-major, num_budgets() per column
};

// False iff the two patches reveal each other's budget as affordable: patch b
// lies below budget t and patch a lies below budget s (a direct-preference
// two-cycle). Intersection mass is excluded, so weak and strict coincide.
bool pairwise_consistent(const Patch& a, int t, const Patch& b, int s);

inline constexpr std::uint64_t kDefaultColumnCap = 2'000'000;

// Depth-first enumeration over one patch choice per budget, pruning with
// pairwise consistency; for SARP a completed assignment is additionally
// rejected when its below-digraph has a directed cycle. Columns come out in
// lexicographic order of the choice tuples.
TypeMatrix enumerate_types(const PatchPartition& partition, Axiom axiom,
                           std::uint64_t column_cap = kDefaultColumnCap);

// Streaming variant for column-wise passes that do not need the matrix in
// memory. The visitor receives each type's per-budget patch choices.
void for_each_type(const PatchPartition& partition, Axiom axiom, std::uint64_t column_cap,
                   const std::function<void(std::span<const std::uint16_t>)>& visit);

// The 4x3 (overlapping budgets) or 2x1 (nested budgets) aggregated type
// matrix of the pair (t, s), over the row groups
// [t-below-s, t-above-s, s-below-t, s-above-t].
TypeMatrix pairwise_type_matrix(const PatchPartition& partition, int t, int s);

// Equality as sets of types up to relabeling patches within each budget
// (and any column order). Candidate row permutations are constrained to
// preserve row sums.
bool equal_up_to_patch_relabeling(const TypeMatrix& a, const TypeMatrix& b);

}  // namespace srp
