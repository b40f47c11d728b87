#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srp/axioms.hpp"
#include "srp/budget.hpp"
#include "srp/rational_types.hpp"
#include "srp/stochastic.hpp"

namespace srp {

// CSV schemas (all files carry a header row):
//   budgets.csv       period,p1,...,pL,expenditure
//   observations.csv  period,household_id,q1,...,qL
//   series.csv        period,p1,...,pL,q1,...,qL
//   rho.csv           period,local_index,probability
// The type-matrix CSV has the line "d_rho,H" followed by d_rho rows of H
// comma-separated 0/1 entries in the global row order.
// Parse failures throw ValidationError naming the file and line number.

std::vector<Budget> read_budgets_csv(const std::string& path);
std::vector<Observation> read_observations_csv(const std::string& path);
void write_observations_csv(const std::string& path, const std::vector<Observation>& observations);
DemandSeries read_series_csv(const std::string& path);

struct GammaCsv {
  int d_rho = 0;
  std::int64_t h = 0;
  Eigen::MatrixXd matrix;
};
GammaCsv read_gamma_csv(const std::string& path);
void write_gamma_csv(const std::string& path, const TypeMatrix& types);
void write_gamma_csv(const std::string& path, const Eigen::MatrixXd& gamma);

struct RhoCsv {
  Eigen::VectorXd probs;
  std::vector<int> block_sizes;
  std::vector<int> periods;  // one per block, in file order
};
RhoCsv read_rho_csv(const std::string& path);
void write_rho_csv(const std::string& path, const StochasticChoiceVector& rho,
                   const std::vector<int>& periods);

// Compact binary format for large type matrices. Layout, little-endian:
//   "SRPG" | u32 version=1 | u32 d_rho | u64 H | u32 T
//   per budget: i32 period | u32 patch_count
//     per patch: u64 sign bits (bit s set iff the patch lies above budget s)
//   column-major u16 patch choices, T per column.
struct GammaBinary {
  TypeMatrix types;
  std::vector<int> periods;
  std::vector<std::vector<std::uint64_t>> sign_bits;  // per budget, per patch
};
void write_gamma_binary(const std::string& path, const TypeMatrix& types,
                        const PatchPartition& partition);
GammaBinary read_gamma_binary(const std::string& path);

}  // namespace srp
