#pragma once

#include <vector>

#include "mtlab/grid.hpp"
#include "mtlab/measure.hpp"

namespace mtlab {

enum class MetricKind {
  NormDistance,
  Wasserstein1,
  Flat,
  MeasureTransmission,
};

/// Total variation of the signed difference: sum over the union support of
/// |w1 - w2|. The supremum over Borel |psi| <= 1 is attained by the sign
/// pattern of the difference.
double norm_distance(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Exact 1-Wasserstein distance: integral of |F1 - F2| over the union-support
/// gaps. Throws UnequalMass when total masses differ beyond tolerance (the
/// Lipschitz-only test class is unbounded there).
double wasserstein1(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Bounded-Lipschitz (flat) distance, computed exactly. The supremum reduces
/// to a finite LP over the test-function values at the union support points
/// (|psi_k| <= 1, |psi_{k+1} - psi_k| <= gap_k); the optimum is attained by a
/// piecewise-linear psi kinked only at support points. Solved by an exact
/// active-set sweep; see flat_lp_value.
double flat_metric(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// Measure-transmission metric: sum over the N+2 grid test intervals of the
/// flat-metric LP applied to the restrictions. No constraint couples distinct
/// intervals, so the decomposition is exact.
double mt_metric(const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                 const BreakpointGrid& grid);

double metric(MetricKind kind, const DiscreteMeasure& m1, const DiscreteMeasure& m2,
              const BreakpointGrid* grid = nullptr);

/// Brute-force reference: vertex enumeration of the LP polytope (norm, flat,
/// MT) or basic-solution enumeration of transport plans (Wasserstein).
/// Throws TooLarge when the combined support exceeds 6 atoms.
double metric_oracle(MetricKind kind, const DiscreteMeasure& m1, const DiscreteMeasure& m2,
                     const BreakpointGrid* grid = nullptr);

namespace detail {

/// max sum d_k psi_k over |psi_k| <= 1, |psi_{k+1} - psi_k| <= pos_{k+1} - pos_k.
/// Exact; near-linear in the number of support points.
double flat_lp_value(const std::vector<double>& positions, const std::vector<double>& weights);

}  // namespace detail

}  // namespace mtlab
