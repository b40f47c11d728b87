#include "srp/axioms.hpp"

#include <algorithm>
#include <cmath>

#include "srp/errors.hpp"

namespace srp {

namespace {

void validate_series(const DemandSeries& series) {
  if (series.empty()) throw ValidationError("demand series is empty");
  const auto dim = series.front().prices.size();
  if (dim < 2) throw ValidationError("demand series needs at least two goods");
  for (const auto& obs : series) {
    if (obs.prices.size() != dim || obs.bundle.size() != dim) {
      throw ValidationError("demand series has mixed dimensions at period " +
                            std::to_string(obs.period));
    }
    if ((obs.prices.array() <= 0.0).any()) {
      throw ValidationError("nonpositive price at period " + std::to_string(obs.period));
    }
    if ((obs.bundle.array() < 0.0).any()) {
      throw ValidationError("negative bundle component at period " + std::to_string(obs.period));
    }
  }
}

bool bundles_distinct(const DemandSeries& series, int t, int s, double rel_tol) {
  const auto& a = series[static_cast<std::size_t>(t)].bundle;
  const auto& b = series[static_cast<std::size_t>(s)].bundle;
  for (int l = 0; l < a.size(); ++l) {
    if (std::abs(a[l] - b[l]) > rel_tol * (1.0 + std::abs(a[l]) + std::abs(b[l]))) return true;
  }
  return false;
}

}  // namespace

std::string to_string(Axiom axiom) {
  switch (axiom) {
    case Axiom::Warp: return "warp";
    case Axiom::Wgarp: return "wgarp";
    case Axiom::Sarp: return "sarp";
  }
  return "?";
}

RevealedRelations build_revealed_relations(const DemandSeries& series, double rel_tol) {
  validate_series(series);
  const int n = static_cast<int>(series.size());
  RevealedRelations rel(n);
  for (int t = 0; t < n; ++t) {
    const auto& pt = series[static_cast<std::size_t>(t)].prices;
    const double own = pt.dot(series[static_cast<std::size_t>(t)].bundle);
    const double tol = rel_tol * own;
    for (int s = 0; s < n; ++s) {
      const double other = pt.dot(series[static_cast<std::size_t>(s)].bundle);
      rel.set(t, s, own >= other - tol, own > other + tol);
    }
  }
  return rel;
}

AxiomReport check_axiom(const DemandSeries& series, Axiom axiom, double rel_tol) {
  AxiomReport report;
  report.axiom = axiom;
  report.relations = build_revealed_relations(series, rel_tol);
  const int n = static_cast<int>(series.size());
  const auto& rel = report.relations;

  if (axiom == Axiom::Warp || axiom == Axiom::Wgarp) {
    for (int t = 0; t < n; ++t) {
      for (int s = 0; s < n; ++s) {
        if (s == t) continue;
        const bool violated =
            (axiom == Axiom::Warp)
                ? (rel.weak(t, s) && rel.weak(s, t) && bundles_distinct(series, t, s, rel_tol))
                : (rel.weak(t, s) && rel.strict(s, t));
        if (violated) {
          report.holds = false;
          report.witness = {t, s};
          return report;
        }
      }
    }
    return report;
  }

  // SARP: transitive closure of the direct weak relation (Floyd-Warshall with
  // path recovery), then look for t != s with t ->* s, weak(s,t), distinct
  // bundles.
  std::vector<char> reach(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> next(static_cast<std::size_t>(n) * n, -1);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      if (t != s && rel.weak(t, s)) {
        reach[at(t, s)] = 1;
        next[at(t, s)] = s;
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!reach[at(i, k)]) continue;
      for (int j = 0; j < n; ++j) {
        if (reach[at(k, j)] && !reach[at(i, j)]) {
          reach[at(i, j)] = 1;
          next[at(i, j)] = next[at(i, k)];
        }
      }
    }
  }
  for (int t = 0; t < n; ++t) {
    for (int s = 0; s < n; ++s) {
      if (s == t) continue;
      if (reach[at(t, s)] && rel.weak(s, t) && bundles_distinct(series, t, s, rel_tol)) {
        report.holds = false;
        for (int v = t; v != s; v = next[at(v, s)]) report.witness.push_back(v);
        report.witness.push_back(s);
        return report;
      }
    }
  }
  return report;
}

}  // namespace srp
