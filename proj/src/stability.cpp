#include "mtlab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mtlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Shared core of the local growth constant; masses are taken on the
// over-approximated outflow window (x_N - sup(g1)*T, x_N), which only
// enlarges the constant and keeps it a priori computable.
double c1_from_parts(double T, double sup_c, double min_g1, double lip_g1, double lip_c,
                     double tv2, double j_mass) {
  double denom = 1.0 - (lip_g1 / min_g1) * j_mass;
  if (lip_g1 > 0.0 && !(denom > 0.0))
    fail(ErrorCode::DenominatorNonpositive,
         "local estimate vacuous: too much mass next to x_N for this horizon");
  if (lip_g1 == 0.0) denom = 1.0;
  double head = std::max(1.0, sup_c / min_g1 * (2.0 + T * sup_c));
  double brace = lip_g1 + 2.0 * sup_c * lip_g1 / min_g1 + 2.0 * lip_c +
                 T * sup_c * (sup_c * lip_g1 / min_g1 + lip_c + lip_g1);
  return head + brace * tv2 * std::max(1.0 / min_g1, T) / denom;
}

}  // namespace

double StabilityConstants::local_c1(double T) const {
  if (!(T > 0.0) || !(T < t_max))
    fail(ErrorCode::OutOfRange, "local constant is defined for 0 < T < the single-pass horizon");
  Interval window = Interval::open(x_last - sup_g1 * T, x_last);
  double j_mass = mu1_0.mass_on(window) + mu2_0.mass_on(window);
  return c1_from_parts(T, sup_c, min_g1, lip_g1, lip_c, tv2, j_mass);
}

double StabilityConstants::global_factor(double t) const {
  if (t <= 0.0) return 1.0;
  double exponent = alpha * std::ceil(t / beta);
  return exponent > 700.0 ? kInf : std::exp(exponent);
}

double local_growth_constant(const ModelCoefficients& model, const DiscreteMeasure& mu1_0,
                             const DiscreteMeasure& mu2_0, double T) {
  return compute_constants(model, mu1_0, mu2_0).local_c1(T);
}

StabilityConstants compute_constants(const ModelCoefficients& model, const DiscreteMeasure& mu1_0,
                                     const DiscreteMeasure& mu2_0) {
  model.validate();
  if (!model.p_is_zero())
    fail(ErrorCode::ConfigInvalid, "stability constants cover the p = 0 system only");

  StabilityConstants k;
  k.tv1 = mu1_0.total_variation();
  k.tv2 = mu2_0.total_variation();
  k.sup_g1 = model.sup_g1();
  k.lip_g1 = model.lip_g1();
  k.sup_c = model.sup_c();
  k.lip_c = model.lip_c();
  // Mass conservation (p = 0) keeps v_j within [0, TV(mu1(0)) + TV(mu2(0))].
  k.min_g1 = model.min_g1_on(k.tv1 + k.tv2);
  k.x_last = model.grid.last();
  k.mu1_0 = mu1_0;
  k.mu2_0 = mu2_0;

  k.t_max = model.grid.min_gap() / k.sup_g1;
  k.t_int = model.grid.last_gap() / k.sup_g1;
  k.t_intmin = model.grid.last_gap() / k.min_g1;
  k.fixed_step = k.lip_g1 == 0.0;
  k.mass_step = k.fixed_step ? kInf : 0.25 * k.min_g1 / k.lip_g1;

  const double step = std::min(1.0, k.t_max);
  const long transit = static_cast<long>(std::ceil(k.t_intmin / step));
  Interval last_open = Interval::open(model.grid.points()[model.grid.points().size() - 2],
                                      model.grid.last());
  double near_mass = mu1_0.mass_on(last_open) + mu2_0.mass_on(last_open);
  const long mass_steps1 =
      k.fixed_step ? 0 : static_cast<long>(std::ceil(near_mass / k.mass_step));
  const long mass_steps2 =
      k.fixed_step ? 0 : static_cast<long>(std::ceil((k.tv1 + k.tv2) / k.mass_step));
  k.it1 = transit + mass_steps1 + 1;
  k.it2 = transit + mass_steps2 + 2;

  // Per-window growth factor: the local constant with the window length and
  // the near-boundary masses replaced by their iteration-scheme caps.
  double head = std::max(1.0, k.sup_c / k.min_g1 * (2.0 + k.sup_c));
  double brace = k.lip_g1 + 2.0 * k.sup_c * k.lip_g1 / k.min_g1 + 2.0 * k.lip_c +
                 k.sup_c * (k.sup_c * k.lip_g1 / k.min_g1 + k.lip_c + k.lip_g1);
  k.kappa = head + 2.0 * brace * k.tv2 * std::max(1.0 / k.min_g1, 1.0);
  k.alpha = static_cast<double>(k.it2) * std::log(k.kappa);
  k.beta = k.t_int;
  return k;
}

namespace {

double rho_mt_at(const Trajectory& t1, const Trajectory& t2, const BreakpointGrid& grid,
                 std::size_t k) {
  return mt_metric(t1.snapshots[k], t2.snapshots[k], grid);
}

void require_common_grid(const Trajectory& t1, const Trajectory& t2) {
  if (t1.steps() != t2.steps() || t1.dt != t2.dt)
    fail(ErrorCode::InvalidArgument, "trajectories must share their time grid");
}

}  // namespace

BoundReport check_local_bound(const Trajectory& t1, const Trajectory& t2,
                              const BreakpointGrid& grid, const StabilityConstants& constants,
                              std::size_t stride, double allowance) {
  require_common_grid(t1, t2);
  if (stride == 0) stride = 1;
  BoundReport report;
  report.rho0 = rho_mt_at(t1, t2, grid, 0);
  report.identical_start = report.rho0 <= 0.0;
  for (std::size_t k = 0; k < t1.steps(); k += stride) {
    BoundRow row;
    row.t = t1.times[k];
    if (!(row.t > 0.0) || !(row.t < constants.t_max)) continue;
    row.value = rho_mt_at(t1, t2, grid, k);
    if (report.identical_start) {
      row.bound = 0.0;
      row.margin = kInf;   // 0/0 convention: satisfied
      row.violated = false;
      report.rows.push_back(row);
      continue;
    }
    try {
      row.bound = constants.local_c1(row.t) * report.rho0;
    } catch (const Error&) {
      row.applicable = false;  // denominator nonpositive at this horizon
      report.rows.push_back(row);
      continue;
    }
    row.margin = row.bound + allowance - row.value;
    row.violated = row.margin < 0.0;
    if (row.violated) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

BoundReport check_global_bound(const Trajectory& t1, const Trajectory& t2,
                               const BreakpointGrid& grid, const StabilityConstants& constants,
                               std::size_t stride, double allowance) {
  require_common_grid(t1, t2);
  if (stride == 0) stride = 1;
  BoundReport report;
  report.rho0 = rho_mt_at(t1, t2, grid, 0);
  report.identical_start = report.rho0 <= 0.0;
  for (std::size_t k = 0; k < t1.steps(); k += stride) {
    BoundRow row;
    row.t = t1.times[k];
    row.value = rho_mt_at(t1, t2, grid, k);
    row.bound = constants.global_factor(row.t) * report.rho0;
    row.margin = row.bound + allowance - row.value;
    row.violated = row.margin < 0.0;
    if (row.violated) ++report.violations;
    report.rows.push_back(row);
  }
  return report;
}

NonlinearReport check_nonlinear_estimate(const Trajectory& t1, const Trajectory& t2,
                                         const BreakpointGrid& grid,
                                         const StabilityConstants& constants, double allowance) {
  require_common_grid(t1, t2);
  NonlinearReport report;
  report.horizon = t1.horizon();
  report.rho0 = rho_mt_at(t1, t2, grid, 0);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < t1.steps(); ++k)
    integral += std::fabs(t1.v_series[k] - t2.v_series[k]) * t1.dt;
  report.integral_v_diff = integral;

  const double T = report.horizon;
  if (T < constants.t_max) {
    Interval window = Interval::open(constants.x_last - constants.sup_g1 * T, constants.x_last);
    double j_mass = constants.mu1_0.mass_on(window) + constants.mu2_0.mass_on(window);
    double denom = 1.0 - (constants.lip_g1 / constants.min_g1) * j_mass;
    if (constants.lip_g1 == 0.0) denom = 1.0;
    if (denom > 0.0) {
      report.local_applicable = true;
      report.bound_local =
          std::max(1.0 / constants.min_g1, T) / denom * report.rho0;
    }
  }
  if (T < constants.t_int) {
    report.iterated_applicable = true;
    double factor = static_cast<double>(constants.it2) * std::log(constants.kappa);
    double kappa_pow = factor > 700.0 ? kInf : std::exp(factor);
    report.bound_iterated = 2.0 * std::max(1.0 / constants.min_g1, constants.t_int) *
                            static_cast<double>(constants.it1) * kappa_pow * report.rho0;
  }
  bool local_bad = report.local_applicable && integral > report.bound_local + allowance;
  bool iter_bad = report.iterated_applicable && integral > report.bound_iterated + allowance;
  report.violated = local_bad || iter_bad;
  return report;
}

AppendixReport check_appendix_inequalities(std::uint64_t seed, std::size_t samples,
                                           const Trajectory* t1, const Trajectory* t2,
                                           const ModelCoefficients* model,
                                           const StabilityConstants* constants,
                                           double tau_allowance) {
  std::mt19937_64 rng(seed);
  AppendixReport report;
  report.samples = samples;
  const double rel = 1e-12;  // absorbs rounding of the two sides

  for (std::size_t i = 0; i < samples; ++i) {
    double x = uniform(rng, 0.0, 5.0);
    double lhs = std::fabs(std::expm1(x));
    double rhs = std::fabs(x) * std::exp(x);
    if (lhs > rhs * (1.0 + rel)) ++report.violations_exp_growth;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    double x = uniform(rng, 0.0, 5.0);
    double y = uniform(rng, 0.0, 5.0);
    double lhs = std::fabs(std::exp(-x) - std::exp(-y));
    double rhs = std::fabs(x - y) * std::exp(-std::min(x, y));
    if (lhs > rhs * (1.0 + rel) + 1e-300) ++report.violations_exp_pair;
  }
  for (std::size_t i = 0; i < samples; ++i) {
    // Random stepwise f1, f2 on [0, 1] with |f| <= 1; integrals are exact.
    const std::size_t cells = 8;
    double int1 = 0.0, int2 = 0.0, int_diff = 0.0, sup = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
      double f1 = uniform(rng, -1.0, 1.0);
      double f2 = uniform(rng, -1.0, 1.0);
      int1 += f1 / cells;
      int2 += f2 / cells;
      int_diff += std::fabs(f1 - f2) / cells;
      sup = std::max({sup, std::fabs(f1), std::fabs(f2)});
    }
    double lhs = std::fabs(std::exp(int1) - std::exp(int2));
    double rhs = std::exp(3.0 * sup) * int_diff;
    if (lhs > rhs * (1.0 + rel) + 1e-300) ++report.violations_exp_integral;
  }

  if (t1 && t2 && model && constants) {
    require_common_grid(*t1, *t2);
    StepSeries v1 = t1->v_as_series();
    StepSeries v2 = t2->v_as_series();
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < t1->steps(); ++k)
      integral += std::fabs(v1.values[k] - v2.values[k]) * t1->dt;
    const double bound = constants->lip_g1 / constants->min_g1 * integral + tau_allowance;

    const auto& pts = model->grid.points();
    const double x_prev = pts[pts.size() - 2];
    const double horizon = t1->horizon();
    double reach1 = displacement_integral(v1, model->g1, horizon);
    double reach2 = displacement_integral(v2, model->g1, horizon);
    double reach = 0.8 * std::min({reach1, reach2, pts.back() - x_prev});
    std::size_t n_tau = std::max<std::size_t>(1, samples / 10);
    for (std::size_t i = 0; i < n_tau; ++i) {
      double x_b = uniform(rng, pts.back() - reach, pts.back() - 1e-9);
      double tau1 = breakpoint_hitting_time(x_b, v1, model->g1, model->grid);
      double tau2 = breakpoint_hitting_time(x_b, v2, model->g1, model->grid);
      if (!std::isfinite(tau1) || !std::isfinite(tau2)) continue;
      ++report.tau_samples;
      if (std::fabs(tau2 - tau1) > bound) ++report.violations_tau;
    }
  }
  return report;
}

}  // namespace mtlab
