#include "srp/rational_types.hpp"

#include <algorithm>
#include <numeric>

#include "srp/errors.hpp"

namespace srp {

TypeMatrix::TypeMatrix(Axiom axiom, std::vector<int> patches_per_budget)
    : axiom_(axiom), patches_per_budget_(std::move(patches_per_budget)) {
  row_offsets_.assign(1, 0);
  for (int count : patches_per_budget_) row_offsets_.push_back(row_offsets_.back() + count);
}

void TypeMatrix::append_column(std::span<const std::uint16_t> choice) {
  if (static_cast<int>(choice.size()) != num_budgets()) {
    throw ValidationError("TypeMatrix::append_column: wrong tuple length");
  }
  choices_.insert(choices_.end(), choice.begin(), choice.end());
}

bool TypeMatrix::entry(int row, std::int64_t column) const {
  int t = 0;
  while (row >= row_offsets_[static_cast<std::size_t>(t) + 1]) ++t;
  return choice(column, t) == row - row_offsets_[static_cast<std::size_t>(t)];
}

Eigen::MatrixXd TypeMatrix::dense() const {
  const std::int64_t h = columns();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows(), h);
  for (std::int64_t col = 0; col < h; ++col) {
    for (int t = 0; t < num_budgets(); ++t) {
      m(row_offset(t) + choice(col, t), col) = 1.0;
    }
  }
  return m;
}

TypeMatrix TypeMatrix::canonical() const {
  TypeMatrix out(axiom_, patches_per_budget_);
  const std::int64_t h = columns();
  const int t_count = num_budgets();
  std::vector<std::vector<std::uint16_t>> cols(static_cast<std::size_t>(h));
  for (std::int64_t col = 0; col < h; ++col) {
    cols[static_cast<std::size_t>(col)].assign(
        choices_.begin() + col * t_count, choices_.begin() + (col + 1) * t_count);
  }
  std::sort(cols.begin(), cols.end());
  for (const auto& c : cols) out.append_column(c);
  return out;
}

bool pairwise_consistent(const Patch& a, int t, const Patch& b, int s) {
  return !(b.side_wrt(t) == Side::Below && a.side_wrt(s) == Side::Below);
}

namespace {

// edge t -> s iff the chosen patch at s lies below budget t
bool below_digraph_has_cycle(const PatchPartition& partition,
                             std::span<const std::uint16_t> choice) {
  const int n = partition.num_budgets();
  std::vector<char> color(static_cast<std::size_t>(n), 0);
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (color[static_cast<std::size_t>(root)] != 0) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      const int u = stack.back();
      if (color[static_cast<std::size_t>(u)] == 0) {
        color[static_cast<std::size_t>(u)] = 1;
        for (int v = 0; v < n; ++v) {
          if (v == u) continue;
          const Patch& chosen = partition.patch(v, choice[static_cast<std::size_t>(v)]);
          if (chosen.side_wrt(u) != Side::Below) continue;
          if (color[static_cast<std::size_t>(v)] == 1) return true;
          if (color[static_cast<std::size_t>(v)] == 0) stack.push_back(v);
        }
      } else {
        color[static_cast<std::size_t>(u)] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

void for_each_type(const PatchPartition& partition, Axiom axiom, std::uint64_t column_cap,
                   const std::function<void(std::span<const std::uint16_t>)>& visit) {
  if (axiom == Axiom::Wgarp) {
    // identical type sets under assumption of no intersection mass
    axiom = Axiom::Warp;
  }
  const int n = partition.num_budgets();
  std::vector<std::uint16_t> choice(static_cast<std::size_t>(n), 0);
  std::uint64_t emitted = 0;

  // iterative DFS; level t tries patch indices in ascending (lexicographic) order
  int level = 0;
  std::vector<int> cursor(static_cast<std::size_t>(n), 0);
  while (level >= 0) {
    if (level == n) {
      if (axiom != Axiom::Sarp || !below_digraph_has_cycle(partition, choice)) {
        if (++emitted > column_cap) throw ColumnCapExceededError(emitted - 1, column_cap);
        visit(choice);
      }
      --level;
      continue;
    }
    const int i = cursor[static_cast<std::size_t>(level)];
    if (i >= partition.patches_in(level)) {
      cursor[static_cast<std::size_t>(level)] = 0;
      --level;
      continue;
    }
    ++cursor[static_cast<std::size_t>(level)];
    const Patch& candidate = partition.patch(level, i);
    bool ok = true;
    for (int s = 0; s < level; ++s) {
      if (!pairwise_consistent(candidate, level,
                               partition.patch(s, choice[static_cast<std::size_t>(s)]), s)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    choice[static_cast<std::size_t>(level)] = static_cast<std::uint16_t>(i);
    ++level;
  }
}

TypeMatrix enumerate_types(const PatchPartition& partition, Axiom axiom,
                           std::uint64_t column_cap) {
  TypeMatrix matrix(axiom, partition.block_sizes());
  for_each_type(partition, axiom, column_cap,
                [&matrix](std::span<const std::uint16_t> choice) { matrix.append_column(choice); });
  return matrix;
}

TypeMatrix pairwise_type_matrix(const PatchPartition& partition, int t, int s) {
  if (t == s) throw ValidationError("pairwise_type_matrix: t and s must differ");
  bool t_has_below = false;
  bool t_has_above = false;
  bool s_has_below = false;
  bool s_has_above = false;
  for (const Patch& patch : partition.patches_of(t)) {
    (patch.side_wrt(s) == Side::Below ? t_has_below : t_has_above) = true;
  }
  for (const Patch& patch : partition.patches_of(s)) {
    (patch.side_wrt(t) == Side::Below ? s_has_below : s_has_above) = true;
  }
  const bool overlap = t_has_below && t_has_above && s_has_below && s_has_above;
  if (!overlap) {
    // nested budgets: one group per side, the all-ones 2x1 system
    TypeMatrix m(Axiom::Warp, {1, 1});
    const std::uint16_t col[2] = {0, 0};
    m.append_column(col);
    return m;
  }
  // groups: index 0 = below the other budget, 1 = above
  TypeMatrix m(Axiom::Warp, {2, 2});
  const std::uint16_t cols[3][2] = {{0, 1}, {1, 0}, {1, 1}};  // (below,below) excluded
  for (const auto& col : cols) m.append_column(col);
  return m;
}

bool equal_up_to_patch_relabeling(const TypeMatrix& a, const TypeMatrix& b) {
  if (a.patches_per_budget() != b.patches_per_budget()) return false;
  if (a.columns() != b.columns()) return false;
  const int t_count = a.num_budgets();
  const std::int64_t h = a.columns();

  // row sums (type counts per patch) are invariant under column permutation
  auto row_counts = [&](const TypeMatrix& m, int t) {
    std::vector<std::int64_t> counts(static_cast<std::size_t>(m.patches_per_budget()[t]), 0);
    for (std::int64_t col = 0; col < h; ++col) ++counts[m.choice(col, t)];
    return counts;
  };

  // per budget, candidate relabelings of b's patches onto a's that match counts
  std::vector<std::vector<std::vector<int>>> candidates(static_cast<std::size_t>(t_count));
  for (int t = 0; t < t_count; ++t) {
    const auto ca = row_counts(a, t);
    const auto cb = row_counts(b, t);
    const int k = static_cast<int>(ca.size());
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool ok = true;
      for (int i = 0; i < k; ++i) {
        if (cb[static_cast<std::size_t>(i)] != ca[perm[static_cast<std::size_t>(i)]]) {
          ok = false;
          break;
        }
      }
      if (ok) candidates[static_cast<std::size_t>(t)].push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (candidates[static_cast<std::size_t>(t)].empty()) return false;
  }

  std::vector<std::vector<std::uint16_t>> a_cols(static_cast<std::size_t>(h));
  for (std::int64_t col = 0; col < h; ++col) {
    for (int t = 0; t < t_count; ++t) a_cols[static_cast<std::size_t>(col)].push_back(a.choice(col, t));
  }
  std::sort(a_cols.begin(), a_cols.end());

  // try every combination of per-budget relabelings (count-pruned, tiny)
  std::vector<std::size_t> pick(static_cast<std::size_t>(t_count), 0);
  for (;;) {
    std::vector<std::vector<std::uint16_t>> b_cols(static_cast<std::size_t>(h));
    for (std::int64_t col = 0; col < h; ++col) {
      for (int t = 0; t < t_count; ++t) {
        const auto& perm = candidates[static_cast<std::size_t>(t)][pick[static_cast<std::size_t>(t)]];
        b_cols[static_cast<std::size_t>(col)].push_back(
            static_cast<std::uint16_t>(perm[b.choice(col, t)]));
      }
    }
    std::sort(b_cols.begin(), b_cols.end());
    if (b_cols == a_cols) return true;
    int t = t_count - 1;
    while (t >= 0 && ++pick[static_cast<std::size_t>(t)] ==
                         candidates[static_cast<std::size_t>(t)].size()) {
      pick[static_cast<std::size_t>(t)] = 0;
      --t;
    }
    if (t < 0) return false;
  }
}

}  // namespace srp
