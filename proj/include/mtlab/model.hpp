#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mtlab/grid.hpp"
#include "mtlab/measure.hpp"
#include "mtlab/piecewise_linear.hpp"

namespace mtlab {

/// Coefficients of the transport system. g1 (speed) and p1 are functions of
/// the coupling v; p2 is a per-interval function of x vanishing outside
/// [x_0, x_N]; c[i] are the outflow rates of the discrete states, c[N] == 0.
struct ModelCoefficients {
  BreakpointGrid grid;
  PiecewiseLinearFn g1 = PiecewiseLinearFn::constant(1.0);
  PiecewiseLinearFn p1 = PiecewiseLinearFn::constant(0.0);
  std::vector<PiecewiseLinearFn> p2;  // size N (interval i covers (x_{i-1}, x_i)), empty => 0
  std::vector<PiecewiseLinearFn> c;   // size N+1

  explicit ModelCoefficients(BreakpointGrid g);

  bool p_is_zero() const;

  /// p2 at x; a point equal to a grid point x_i uses the interval ending at
  /// x_i (same convention as the MT test intervals). Zero outside [x_0, x_N].
  double p2_at(double x) const;

  double sup_c() const;
  double lip_c() const;
  double sup_g1() const { return g1.sup(); }
  double lip_g1() const { return g1.lipschitz(); }

  /// Infimum of g1 over v in [0, tv_bound]; throws NonPositiveSpeed if <= 0.
  double min_g1_on(double tv_bound) const;

  /// Enforces the standing assumptions: g1 > 0, c_i >= 0, c_N == 0.
  void validate() const;
};

struct SolverConfig {
  double dt = 0.0;
  double horizon = 0.0;
  int quad_particles_per_step = 1;
  double merge_tolerance = 0.0;
  double drop_tolerance = 0.0;
  bool present = false;
};

/// A parsed model file: coefficients, named initial measures (file order
/// preserved) and the optional solver block.
struct ModelFile {
  ModelCoefficients model;
  std::vector<std::pair<std::string, DiscreteMeasure>> initial_measures;
  SolverConfig solver;

  const DiscreteMeasure& measure(const std::string& name) const;
};

ModelFile load_model_file(const std::string& json_text);
std::string model_file_to_json(const ModelFile& file);

}  // namespace mtlab
