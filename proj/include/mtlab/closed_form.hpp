#pragma once

#include <utility>

#include "mtlab/dynamics.hpp"

namespace mtlab {

/// Closed-form reference solutions for the worked configurations used as
/// ground truth by tests and the stability harness.
enum class AnalyticKind {
  FrozenAtom,          // unit atom parked at a breakpoint, no outflow
  FreeAtom,            // unit atom in unit-speed transport
  ConstantOutflow,     // parked atom decaying at constant rate + outflow density
  TwoAtomSpeedCoupled, // atom at x_N plus a trailing atom, two-level speed
};

struct AnalyticSolution {
  AnalyticKind kind;
  BreakpointGrid grid;
  double start = 0.0;   // initial atom position
  double rate = 0.0;    // constant outflow rate (ConstantOutflow)
  double speed = 1.0;   // transport speed (FreeAtom / TwoAtomSpeedCoupled trailing atom)
  double companion = 0.0;  // second atom position (TwoAtomSpeedCoupled)
  int quadrature_atoms = 1000;  // cells used to discretize a continuous part

  /// The measure at time t. A continuous part is discretized into
  /// quadrature_atoms midpoint cells with exact per-cell mass.
  DiscreteMeasure at(double t) const;
};

/// Unit-speed pair (frozen atom at x_1, free atom from x_1 + eps); valid while
/// the free atom stays short of x_2.
std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_1_1(double t, double eps,
                                                             const BreakpointGrid& grid);

/// Decaying atom at x_1 (rate c1) with its outflow density, against the
/// delayed atom started at x_1 - eps; t <= eps, outflow confined to (x_1,x_2).
std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_4_5(double t, double eps, double c1,
                                                             int quadrature_atoms,
                                                             const BreakpointGrid& grid);

/// Two-atom speed-coupled pair: (atom at x_N + atom at y) vs (atom at
/// x_N - eps + atom at y); the first pair moves at speed 1 (v = 1), the
/// second at g_low (v = 0), until the delayed atom arrives at t = eps/g_low.
std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_4_6(double t, double eps, double g_low,
                                                             double y, const BreakpointGrid& grid);

/// Coefficient sets matching the three examples, for feeding the simulator.
ModelCoefficients example_model_1_1(const BreakpointGrid& grid);
ModelCoefficients example_model_4_5(double c1, const BreakpointGrid& grid);
ModelCoefficients example_model_4_6(double g_low, const BreakpointGrid& grid);

}  // namespace mtlab
