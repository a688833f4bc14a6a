#pragma once

#include <vector>

#include "mtlab/model.hpp"

namespace mtlab {

/// A scalar sampled per time step, held constant within each step (the
/// explicit coupling freezes v at its start-of-step value). values[k] is the
/// value on [k*dt, (k+1)*dt); values.back() also extends to the endpoint.
struct StepSeries {
  double dt = 0.0;
  std::vector<double> values;

  double duration() const { return dt * static_cast<double>(values.size()); }
  double at(double t) const;
};

/// Cumulative displacement integral of g1(v(s)) over [0, t]; exact for the
/// stepwise v. Monotone increasing since g1 > 0. Throws OutOfRange for t
/// outside the sampled range.
double displacement_integral(const StepSeries& v, const PiecewiseLinearFn& g1, double t);

/// First time the characteristic from x_b reaches a grid point; 0 when x_b is
/// already at one (within position tolerance), +inf when no grid point is
/// reached within the sampled horizon.
double breakpoint_hitting_time(double x_b, const StepSeries& v, const PiecewiseLinearFn& g1,
                               const BreakpointGrid& grid);

/// Characteristic with branching time r: transport until the hitting time,
/// waiting at the breakpoint until r, transport again afterwards. Requires
/// r >= hitting time when the hitting time lies within the horizon.
double characteristic_position(double x_b, double r, double t, const StepSeries& v,
                               const PiecewiseLinearFn& g1, const BreakpointGrid& grid);

/// Distribution of the branching time r over [0, T] for a characteristic from
/// x_b: an atom at r = T (mass that stays parked) plus quadrature atoms of the
/// outflow density. stay_weight + flow mass == 1 up to rounding.
struct BranchingMeasure {
  double stay_weight = 1.0;
  std::vector<Atom> flow;  // (r_i, w_i), empty when the characteristic never branches

  double flow_mass() const;
};

BranchingMeasure branching_eta(double x_b, const BreakpointGrid& grid,
                               const std::vector<PiecewiseLinearFn>& c,
                               const PiecewiseLinearFn& g1, const StepSeries& v, double T,
                               int quad_steps);

/// Integral of phi against the solution at time T, assembled from the initial
/// atoms, their branching measures and (for p != 0) the exponential growth
/// factor along each characteristic. Valid below the single-pass horizon.
double superposition_eval(const DiscreteMeasure& m0, const PiecewiseLinearFn& phi,
                          const ModelCoefficients& model, const StepSeries& v, double T,
                          int quad_steps);

struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<DiscreteMeasure> snapshots;
  std::vector<double> v_series;  // mass at x_N per snapshot

  std::size_t steps() const { return times.size(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  StepSeries v_as_series() const { return {dt, v_series}; }
};

/// Explicit particle scheme. Per step: v is frozen at its start-of-step
/// value; free atoms advance by g1(v)*dt and halt exactly at the first grid
/// point they cross (decay starts for the residual step fraction); an atom
/// parked at x_i (i < N) keeps w*exp(-c_i(v)*dt) and emits the released mass
/// into the step's emission window (quad_particles_per_step cells, exact mass
/// per cell, placed at cell-midpoint positions); atoms reaching x_N park for
/// good. merge_tolerance > 0 merges free atoms closer than the tolerance
/// within one interval (mass-weighted centroid); parked atoms never move.
Trajectory simulate(const DiscreteMeasure& m0, const ModelCoefficients& model, double horizon,
                    double dt, int quad_particles_per_step = 1, double merge_tolerance = 0.0,
                    double drop_tolerance = 0.0);

/// min over gaps / sup(g1): below this horizon no characteristic can cross a
/// full interval, which is what the single-pass analysis needs.
double single_pass_horizon(const BreakpointGrid& grid, const PiecewiseLinearFn& g1);

}  // namespace mtlab
