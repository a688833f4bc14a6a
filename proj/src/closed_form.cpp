#include "mtlab/closed_form.hpp"

#include <cmath>

namespace mtlab {

namespace {

double grid_point_for(const BreakpointGrid& grid, std::size_t i) {
  if (i >= grid.points().size()) fail(ErrorCode::InvalidArgument, "grid too small for this example");
  return grid.points()[i];
}

// Snap a computed coordinate onto the grid when it lands within tolerance.
double snapped(double x, const BreakpointGrid& grid) {
  int idx = grid.index_at(x);
  return idx >= 0 ? grid.points()[static_cast<std::size_t>(idx)] : x;
}

}  // namespace

DiscreteMeasure AnalyticSolution::at(double t) const {
  switch (kind) {
    case AnalyticKind::FrozenAtom:
      return DiscreteMeasure::make({{start, 1.0}});
    case AnalyticKind::FreeAtom:
      return DiscreteMeasure::make({{snapped(start + speed * t, grid), 1.0}});
    case AnalyticKind::ConstantOutflow: {
      // Parked mass exp(-rate*t) plus the emitted density
      // rate * exp(-rate*(t - (x - start))) on [start, start + t], discretized
      // into cells of exact mass (weights telescope to 1 - exp(-rate*t)).
      std::vector<Atom> atoms;
      atoms.push_back({start, std::exp(-rate * t)});
      if (rate > 0.0 && t > 0.0) {
        const int cells = quadrature_atoms;
        double w_prev = std::exp(-rate * t);
        for (int i = 0; i < cells; ++i) {
          double off0 = t * i / cells;
          double off1 = i + 1 == cells ? t : t * (i + 1) / cells;
          double w_next = std::exp(-rate * (t - off1));
          atoms.push_back({start + 0.5 * (off0 + off1), w_next - w_prev});
          w_prev = w_next;
        }
      }
      return DiscreteMeasure::make(std::move(atoms));
    }
    case AnalyticKind::TwoAtomSpeedCoupled: {
      // Leading atom parks at x_N; the trailing atom keeps moving.
      double lead = std::min(start + speed * t, grid.points().back());
      double trail = companion + speed * t;
      return DiscreteMeasure::make({{snapped(lead, grid), 1.0}, {snapped(trail, grid), 1.0}});
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown analytic kind");
}

std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_1_1(double t, double eps,
                                                             const BreakpointGrid& grid) {
  const double x1 = grid_point_for(grid, 1);
  const double x2 = grid_point_for(grid, 2);
  if (t < 0.0 || eps <= 0.0 || !(eps + t < x2 - x1))
    fail(ErrorCode::OutOfRange, "perturbed atom would pass the next breakpoint");
  AnalyticSolution frozen{AnalyticKind::FrozenAtom, grid, x1};
  AnalyticSolution moving{AnalyticKind::FreeAtom, grid, x1 + eps};
  return {frozen.at(t), moving.at(t)};
}

std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_4_5(double t, double eps, double c1,
                                                             int quadrature_atoms,
                                                             const BreakpointGrid& grid) {
  const double x1 = grid_point_for(grid, 1);
  const double x2 = grid_point_for(grid, 2);
  if (t < 0.0 || eps <= 0.0 || t > eps || !(eps < x2 - x1) || c1 < 0.0 || quadrature_atoms < 1)
    fail(ErrorCode::OutOfRange, "outflow must stay inside (x_1, x_2) and t <= eps");
  AnalyticSolution outflow{AnalyticKind::ConstantOutflow, grid, x1, c1};
  outflow.quadrature_atoms = quadrature_atoms;
  DiscreteMeasure delayed = t < eps ? DiscreteMeasure::make({{x1 + t - eps, 1.0}})
                                    : DiscreteMeasure::make({{x1, 1.0}});
  return {outflow.at(t), delayed};
}

std::pair<DiscreteMeasure, DiscreteMeasure> eval_example_4_6(double t, double eps, double g_low,
                                                             double y, const BreakpointGrid& grid) {
  const auto& pts = grid.points();
  const double x_last = pts.back();
  const double x_prev = pts[pts.size() - 2];
  if (!(g_low > 0.0) || g_low > 1.0 || eps <= 0.0)
    fail(ErrorCode::OutOfRange, "two-level speed needs 0 < g_low <= 1 and eps > 0");
  if (!(x_prev < y && y < x_last) || !(x_last - y > 1.0))
    fail(ErrorCode::OutOfRange, "trailing atom must sit in (x_{N-1}, x_N) with x_N - y > 1");
  const double t_bar = eps / g_low;
  if (t < 0.0 || t > t_bar || y + t_bar >= x_last)
    fail(ErrorCode::OutOfRange, "valid only until the delayed atom arrives at x_N");
  // The unperturbed pair has unit mass at x_N (v = 1, unit speed); the
  // perturbed pair starts with the lead atom at x_N - eps (v = 0, speed g_low).
  AnalyticSolution fast{AnalyticKind::TwoAtomSpeedCoupled, grid, x_last, 0.0, 1.0, y};
  AnalyticSolution slow{AnalyticKind::TwoAtomSpeedCoupled, grid, x_last - eps, 0.0, g_low, y};
  return {fast.at(t), slow.at(t)};
}

ModelCoefficients example_model_1_1(const BreakpointGrid& grid) {
  ModelCoefficients model(grid);
  model.g1 = PiecewiseLinearFn::constant(1.0);
  return model;  // all outflow rates zero
}

ModelCoefficients example_model_4_5(double c1, const BreakpointGrid& grid) {
  ModelCoefficients model(grid);
  model.g1 = PiecewiseLinearFn::constant(1.0);
  model.c[1] = PiecewiseLinearFn::constant(c1);
  return model;
}

ModelCoefficients example_model_4_6(double g_low, const BreakpointGrid& grid) {
  ModelCoefficients model(grid);
  // Two-level speed g(0) = g_low, g(1) = 1, carried as a steep ramp so the
  // coefficient stays Lipschitz; only v = 0 and v = 1 occur in the example.
  model.g1 = PiecewiseLinearFn({0.0, 1.0 - 1e-6, 1.0}, {g_low, g_low, 1.0});
  return model;
}

}  // namespace mtlab
