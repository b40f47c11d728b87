#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace srp {

// One period of nonstochastic demand data: prices faced and bundle chosen.
struct DemandObservation {
  Eigen::VectorXd prices;
  Eigen::VectorXd bundle;
  int period = 0;
};

using DemandSeries = std::vector<DemandObservation>;

enum class Axiom { Warp, Wgarp, Sarp };

std::string to_string(Axiom axiom);

// Direct revealed preference flags between periods: weak(t,s) iff bundle s is
// affordable at t's prices and expenditure, strict(t,s) iff strictly cheaper.
class RevealedRelations {
 public:
  explicit RevealedRelations(int periods)
      : periods_(periods),
        weak_(static_cast<std::size_t>(periods) * periods, false),
        strict_(weak_.size(), false) {}

  int periods() const { return periods_; }
  bool weak(int t, int s) const { return weak_[index(t, s)]; }
  bool strict(int t, int s) const { return strict_[index(t, s)]; }
  void set(int t, int s, bool weak, bool strict) {
    weak_[index(t, s)] = weak;
    strict_[index(t, s)] = strict;
  }

 private:
  std::size_t index(int t, int s) const {
    return static_cast<std::size_t>(t) * periods_ + s;
  }
  int periods_;
  std::vector<bool> weak_, strict_;
};

// Comparison tolerance is `rel_tol` scaled by the period's own expenditure.
RevealedRelations build_revealed_relations(const DemandSeries& series, double rel_tol = 1e-9);

struct AxiomReport {
  Axiom axiom = Axiom::Warp;
  bool holds = true;
  // Violating pair (WARP/WGARP) or cycle (SARP) as positions in the series;
  // empty iff holds.
  std::vector<int> witness;
  RevealedRelations relations{0};
};

AxiomReport check_axiom(const DemandSeries& series, Axiom axiom, double rel_tol = 1e-9);

}  // namespace srp
