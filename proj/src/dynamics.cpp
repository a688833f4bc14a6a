#include "mtlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double StepSeries::at(double t) const {
  if (values.empty()) fail(ErrorCode::OutOfRange, "empty step series");
  if (t < 0.0 || t > duration() + 1e-12 * std::max(1.0, duration()))
    fail(ErrorCode::OutOfRange, "time outside the sampled range");
  std::size_t k = dt > 0.0 ? static_cast<std::size_t>(t / dt) : 0;
  if (k >= values.size()) k = values.size() - 1;
  return values[k];
}

double displacement_integral(const StepSeries& v, const PiecewiseLinearFn& g1, double t) {
  if (t < 0.0 || t > v.duration() + 1e-12 * std::max(1.0, v.duration()))
    fail(ErrorCode::OutOfRange, "time outside the sampled range");
  double acc = 0.0;
  double done = 0.0;
  for (double vk : v.values) {
    if (done + v.dt >= t) return acc + g1(vk) * (t - done);
    acc += g1(vk) * v.dt;
    done += v.dt;
  }
  return acc;
}

namespace {

// Inverts the displacement integral: first t with integral == target, or +inf
// when the sampled horizon is too short. g1 > 0 keeps this well defined.
double invert_displacement(const StepSeries& v, const PiecewiseLinearFn& g1, double target) {
  if (target <= 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    double speed = g1(v.values[k]);
    double next = acc + speed * v.dt;
    if (next >= target) return static_cast<double>(k) * v.dt + (target - acc) / speed;
    acc = next;
  }
  return kInf;
}

}  // namespace

double breakpoint_hitting_time(double x_b, const StepSeries& v, const PiecewiseLinearFn& g1,
                               const BreakpointGrid& grid) {
  if (grid.index_at(x_b) >= 0) return 0.0;
  int next = grid.next_index_after(x_b);
  if (next < 0) return kInf;
  return invert_displacement(v, g1, grid.points()[static_cast<std::size_t>(next)] - x_b);
}

double characteristic_position(double x_b, double r, double t, const StepSeries& v,
                               const PiecewiseLinearFn& g1, const BreakpointGrid& grid) {
  const double tau = breakpoint_hitting_time(x_b, v, g1, grid);
  if (t <= tau) return x_b + displacement_integral(v, g1, t);
  // Only the post-arrival phases need a branching time at or after arrival.
  if (tau <= v.duration() && r < tau)
    fail(ErrorCode::BranchBeforeArrival, "branching time precedes arrival at the breakpoint");
  int idx = grid.index_at(x_b);
  const double stop = idx >= 0 ? grid.points()[static_cast<std::size_t>(idx)]
                               : grid.points()[static_cast<std::size_t>(grid.next_index_after(x_b))];
  if (t <= r) return stop;
  return stop + displacement_integral(v, g1, t) - displacement_integral(v, g1, r);
}

double single_pass_horizon(const BreakpointGrid& grid, const PiecewiseLinearFn& g1) {
  return grid.min_gap() / g1.sup();
}

double BranchingMeasure::flow_mass() const {
  double m = 0.0;
  for (const Atom& a : flow) m += a.weight;
  return m;
}

namespace {

// Integral of c(v(s)) over [a, b]; exact because v is a step function.
double rate_integral(const PiecewiseLinearFn& c, const StepSeries& v, double a, double b) {
  if (b <= a) return 0.0;
  double total = 0.0;
  std::size_t k0 = v.dt > 0.0 ? static_cast<std::size_t>(a / v.dt) : 0;
  for (std::size_t k = k0; k < v.values.size(); ++k) {
    double lo = std::max(a, static_cast<double>(k) * v.dt);
    double hi = std::min(b, static_cast<double>(k + 1) * v.dt);
    if (hi <= lo) {
      if (lo >= b) break;
      continue;
    }
    total += c(v.values[k]) * (hi - lo);
    if (hi >= b) break;
  }
  return total;
}

}  // namespace

BranchingMeasure branching_eta(double x_b, const BreakpointGrid& grid,
                               const std::vector<PiecewiseLinearFn>& c,
                               const PiecewiseLinearFn& g1, const StepSeries& v, double T,
                               int quad_steps) {
  if (!(T < single_pass_horizon(grid, g1)))
    fail(ErrorCode::HorizonExceeded, "branching horizon must stay below the single-pass bound");
  if (T > v.duration() + 1e-12 * std::max(1.0, v.duration()))
    fail(ErrorCode::OutOfRange, "v series does not cover the branching horizon");
  if (quad_steps < 1) fail(ErrorCode::InvalidArgument, "quad_steps must be >= 1");

  BranchingMeasure out;
  const std::size_t interval = grid.interval_index(x_b);
  const bool interior = interval >= 1 && interval + 1 < grid.points().size();  // lambda in 1..N-1
  const double tau = breakpoint_hitting_time(x_b, v, g1, grid);
  if (!interior || !(tau <= T)) return out;  // pure atom at r = T

  const PiecewiseLinearFn& rate = c[interval];
  // Survival S(r) = exp(-int_tau^r c(v)); the flow cell [r_j, r_{j+1}] carries
  // exactly S(r_j) - S(r_{j+1}) at the cell midpoint, so stay + flow
  // telescopes to 1 regardless of the cell count.
  double integral = 0.0;
  double survival_prev = 1.0;
  const double width = (T - tau) / quad_steps;
  out.flow.reserve(static_cast<std::size_t>(quad_steps));
  for (int jcell = 0; jcell < quad_steps; ++jcell) {
    double r0 = tau + width * jcell;
    double r1 = jcell + 1 == quad_steps ? T : tau + width * (jcell + 1);
    integral += rate_integral(rate, v, r0, r1);
    double survival = std::exp(-integral);
    double w = survival_prev - survival;
    if (w != 0.0) out.flow.push_back({0.5 * (r0 + r1), w});
    survival_prev = survival;
  }
  out.stay_weight = survival_prev;
  return out;
}

double superposition_eval(const DiscreteMeasure& m0, const PiecewiseLinearFn& phi,
                          const ModelCoefficients& model, const StepSeries& v, double T,
                          int quad_steps) {
  if (!(T < single_pass_horizon(model.grid, model.g1)))
    fail(ErrorCode::HorizonExceeded, "superposition representation needs T below the single-pass bound");
  if (T > v.duration() + 1e-12 * std::max(1.0, v.duration()))
    fail(ErrorCode::OutOfRange, "v series does not cover the horizon");

  const bool with_p = !model.p_is_zero();
  double total = 0.0;
  for (const Atom& a : m0.atoms()) {
    BranchingMeasure eta = branching_eta(a.pos, model.grid, model.c, model.g1, v, T, quad_steps);
    auto term = [&](double r, double weight) {
      double x_end = characteristic_position(a.pos, r, T, v, model.g1, model.grid);
      double factor = 1.0;
      if (with_p) {
        double growth = 0.0;
        std::size_t steps = v.values.size();
        for (std::size_t k = 0; k < steps; ++k) {
          double t0 = static_cast<double>(k) * v.dt;
          if (t0 >= T) break;
          double span = std::min(T, t0 + v.dt) - t0;
          double x_here = characteristic_position(a.pos, r, t0, v, model.g1, model.grid);
          growth += model.p1(v.values[k]) * model.p2_at(x_here) * span;
        }
        factor = std::exp(growth);
      }
      total += a.weight * weight * phi(x_end) * factor;
    };
    term(T, eta.stay_weight);
    for (const Atom& cell : eta.flow) term(cell.pos, cell.weight);
  }
  return total;
}

namespace {

struct SimAtom {
  double pos;
  double weight;
  int park_index;  // grid point index when parked, -1 when free
};

// Emits the mass released from a parked atom during a window of length `span`
// into midpoint cells; weights telescope so parked + emitted == original.
void emit_outflow(double grid_pos, double weight_before, double rate, double span, double speed,
                  double next_point, int next_index, int cells, std::vector<SimAtom>& out,
                  double& kept) {
  double w_prev = weight_before;
  for (int jcell = 0; jcell < cells; ++jcell) {
    double s0 = span * jcell / cells;
    double s1 = jcell + 1 == cells ? span : span * (jcell + 1) / cells;
    double w_next = weight_before * std::exp(-rate * s1);
    double released = w_prev - w_next;
    w_prev = w_next;
    if (released <= 0.0) continue;
    double travel = speed * (span - 0.5 * (s0 + s1));
    double pos = grid_pos + travel;
    if (next_index >= 0 && pos >= next_point - position_tolerance(pos, next_point))
      out.push_back({next_point, released, next_index});  // cannot overshoot a state
    else
      out.push_back({pos, released, -1});
  }
  kept = w_prev;
}

}  // namespace

Trajectory simulate(const DiscreteMeasure& m0, const ModelCoefficients& model, double horizon,
                    double dt, int quad_particles_per_step, double merge_tolerance,
                    double drop_tolerance) {
  if (!(dt > 0.0)) fail(ErrorCode::InvalidStep, "time step must be positive");
  if (!(horizon > 0.0)) fail(ErrorCode::InvalidStep, "horizon must be positive");
  if (quad_particles_per_step < 1)
    fail(ErrorCode::InvalidArgument, "quad_particles_per_step must be >= 1");
  model.validate();

  const auto& points = model.grid.points();
  const int last = static_cast<int>(points.size()) - 1;
  for (const Atom& a : m0.atoms())
    if (a.pos < points.front() - position_tolerance(a.pos, points.front()) ||
        a.pos > points.back() + position_tolerance(a.pos, points.back()))
      fail(ErrorCode::InvalidArgument, "initial measure must be supported in [x_0, x_N]");

  const std::size_t n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(horizon / dt)));
  const double step = horizon / static_cast<double>(n_steps);
  const bool with_p = !model.p_is_zero();

  // Working state; atoms at grid points are snapped to the exact coordinate.
  std::vector<SimAtom> state;
  state.reserve(m0.size());
  for (const Atom& a : m0.atoms()) {
    int idx = model.grid.index_at(a.pos);
    state.push_back({idx >= 0 ? points[static_cast<std::size_t>(idx)] : a.pos, a.weight, idx});
  }

  Trajectory traj;
  traj.dt = step;
  traj.times.reserve(n_steps + 1);
  traj.snapshots.reserve(n_steps + 1);
  traj.v_series.reserve(n_steps + 1);

  auto record = [&](std::size_t k) {
    std::vector<Atom> atoms;
    atoms.reserve(state.size());
    double v = 0.0;
    for (const SimAtom& a : state) {
      atoms.push_back({a.pos, a.weight});
      if (a.park_index == last) v += a.weight;
    }
    traj.times.push_back(static_cast<double>(k) * step);
    traj.snapshots.push_back(DiscreteMeasure::from_sorted_unchecked(std::move(atoms)));
    traj.v_series.push_back(v);
  };
  record(0);

  std::vector<SimAtom> next;
  std::vector<SimAtom> emitted;
  for (std::size_t k = 0; k < n_steps; ++k) {
    double v = traj.v_series.back();
    double speed = model.g1(v);
    next.clear();
    emitted.clear();

    for (const SimAtom& a : state) {
      if (a.park_index >= 0) {
        if (a.park_index == last) {
          next.push_back(a);
          continue;
        }
        double rate = model.c[static_cast<std::size_t>(a.park_index)](v);
        if (rate <= 0.0) {
          next.push_back(a);
          continue;
        }
        double kept = a.weight;
        emit_outflow(a.pos, a.weight, rate, step, speed,
                     points[static_cast<std::size_t>(a.park_index) + 1], a.park_index + 1,
                     quad_particles_per_step, emitted, kept);
        next.push_back({a.pos, kept, a.park_index});
      } else {
        double target = a.pos + speed * step;
        int hit = model.grid.next_index_after(a.pos);
        bool crosses =
            hit >= 0 && target >= points[static_cast<std::size_t>(hit)] -
                                     position_tolerance(target, points[static_cast<std::size_t>(hit)]);
        if (!crosses) {
          next.push_back({target, a.weight, -1});
          continue;
        }
        double stop = points[static_cast<std::size_t>(hit)];
        double residual = std::clamp(step - (stop - a.pos) / speed, 0.0, step);
        double rate = hit == last ? 0.0 : model.c[static_cast<std::size_t>(hit)](v);
        if (rate <= 0.0 || residual <= 0.0) {
          next.push_back({stop, a.weight, hit});
          continue;
        }
        double kept = a.weight;
        emit_outflow(stop, a.weight, rate, residual, speed,
                     points[static_cast<std::size_t>(hit) + 1], hit + 1, quad_particles_per_step,
                     emitted, kept);
        next.push_back({stop, kept, hit});
      }
    }

    std::sort(emitted.begin(), emitted.end(),
              [](const SimAtom& x, const SimAtom& y) { return x.pos < y.pos; });
    std::vector<SimAtom> merged;
    merged.reserve(next.size() + emitted.size());
    std::merge(next.begin(), next.end(), emitted.begin(), emitted.end(),
               std::back_inserter(merged),
               [](const SimAtom& x, const SimAtom& y) { return x.pos < y.pos; });

    // Exact-position merge; the same grid point's parked mass collapses here.
    state.clear();
    for (std::size_t i = 0; i < merged.size();) {
      SimAtom acc = merged[i];
      std::size_t j = i + 1;
      while (j < merged.size() && same_position(merged[i].pos, merged[j].pos)) {
        if (merged[j].park_index >= 0) {
          acc.pos = merged[j].pos;
          acc.park_index = merged[j].park_index;
        }
        acc.weight += merged[j].weight;
        ++j;
      }
      state.push_back(acc);
      i = j;
    }

    if (merge_tolerance > 0.0) {
      std::vector<SimAtom> coarse;
      coarse.reserve(state.size());
      for (std::size_t i = 0; i < state.size();) {
        if (state[i].park_index >= 0) {
          coarse.push_back(state[i]);
          ++i;
          continue;
        }
        std::size_t j = i;
        double wsum = 0.0, wxsum = 0.0;
        std::size_t iv = model.grid.interval_index(state[i].pos);
        while (j < state.size() && state[j].park_index < 0 &&
               state[j].pos - state[i].pos <= merge_tolerance &&
               model.grid.interval_index(state[j].pos) == iv) {
          wsum += state[j].weight;
          wxsum += state[j].weight * state[j].pos;
          ++j;
        }
        coarse.push_back({wsum > 0.0 ? wxsum / wsum : state[i].pos, wsum, -1});
        i = j;
      }
      state = std::move(coarse);
    }

    if (drop_tolerance > 0.0 && state.size() > 1) {
      std::vector<SimAtom> kept;
      kept.reserve(state.size());
      std::vector<SimAtom> small;
      for (const SimAtom& a : state)
        (a.weight < drop_tolerance ? small : kept).push_back(a);
      if (kept.empty()) {
        kept = std::move(state);
      } else {
        for (const SimAtom& a : small) {
          std::size_t best = 0;
          double dist = kInf;
          for (std::size_t idx = 0; idx < kept.size(); ++idx) {
            double cand = std::fabs(kept[idx].pos - a.pos);
            if (cand < dist) {
              dist = cand;
              best = idx;
            }
          }
          kept[best].weight += a.weight;
        }
      }
      state = std::move(kept);
    }

    if (with_p) {
      double growth_rate = model.p1(v);
      for (SimAtom& a : state) a.weight *= std::exp(growth_rate * model.p2_at(a.pos) * step);
    }

    record(k + 1);
  }
  return traj;
}

}  // namespace mtlab
