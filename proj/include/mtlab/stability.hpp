#pragma once

#include <cstdint>
#include <vector>

#include "mtlab/dynamics.hpp"
#include "mtlab/metrics.hpp"

namespace mtlab {

/// Every explicit constant of the stability machinery, computed a priori from
/// the coefficient tables and the two initial measures (p = 0 regime).
struct StabilityConstants {
  double t_max = 0.0;     // single-pass horizon: min gap / sup(g1)
  double t_int = 0.0;     // last gap / sup(g1)
  double t_intmin = 0.0;  // last gap / min(g1)
  double mass_step = 0.0; // L = min(g1) / (4 Lip(g1)); +inf when Lip(g1) = 0
  long it1 = 0;
  long it2 = 0;
  double kappa = 1.0;     // per-window growth factor
  double alpha = 0.0;     // it2 * ln(kappa)
  double beta = 0.0;      // = t_int, so the global bound is exp(alpha * ceil(t/beta))
  bool fixed_step = false;  // Lip(g1) = 0: the mass-step iteration degenerates

  double min_g1 = 0.0;
  double sup_g1 = 0.0;
  double sup_c = 0.0;
  double lip_g1 = 0.0;
  double lip_c = 0.0;
  double tv1 = 0.0;
  double tv2 = 0.0;

  double x_last = 0.0;              // x_N
  DiscreteMeasure mu1_0, mu2_0;     // kept for the T-dependent local constant

  /// Local growth constant C1(T), 0 < T < t_max. Throws DenominatorNonpositive
  /// when the mass condition makes the local estimate vacuous for this pair.
  double local_c1(double T) const;

  /// exp(alpha * ceil(t / beta)), saturating to +inf instead of overflowing.
  double global_factor(double t) const;
};

double local_growth_constant(const ModelCoefficients& model, const DiscreteMeasure& mu1_0,
                             const DiscreteMeasure& mu2_0, double T);

StabilityConstants compute_constants(const ModelCoefficients& model, const DiscreteMeasure& mu1_0,
                                     const DiscreteMeasure& mu2_0);

struct BoundRow {
  double t = 0.0;
  double value = 0.0;   // measured rho_MT(t)
  double bound = 0.0;   // bound before the discretization allowance
  double margin = 0.0;  // bound + allowance - value
  bool applicable = true;
  bool violated = false;
};

struct BoundReport {
  std::vector<BoundRow> rows;
  std::size_t violations = 0;
  double rho0 = 0.0;
  bool identical_start = false;  // 0/0 convention: reported as satisfied
};

/// rho_MT(t) <= C1(t) * rho_MT(0) for t below the single-pass horizon.
/// `stride` picks every stride-th trajectory time; `allowance` is the additive
/// discretization slack (1e-6 + C*dt, pinned by the caller).
BoundReport check_local_bound(const Trajectory& t1, const Trajectory& t2,
                              const BreakpointGrid& grid, const StabilityConstants& constants,
                              std::size_t stride = 1, double allowance = 1e-6);

/// rho_MT(t) <= exp(alpha * ceil(t/beta)) * rho_MT(0) at every sampled time.
BoundReport check_global_bound(const Trajectory& t1, const Trajectory& t2,
                               const BreakpointGrid& grid, const StabilityConstants& constants,
                               std::size_t stride = 1, double allowance = 0.0);

struct NonlinearReport {
  double horizon = 0.0;
  double integral_v_diff = 0.0;   // measured integral of |v1 - v2|
  double rho0 = 0.0;
  double bound_local = 0.0;       // max(1/min(g1), T) / (1 - ...) * rho0
  bool local_applicable = false;
  double bound_iterated = 0.0;    // 2 max(1/min(g1), T_int) It1 kappa^It2 * rho0
  bool iterated_applicable = false;
  bool violated = false;
};

NonlinearReport check_nonlinear_estimate(const Trajectory& t1, const Trajectory& t2,
                                         const BreakpointGrid& grid,
                                         const StabilityConstants& constants,
                                         double allowance = 0.0);

struct AppendixReport {
  std::size_t samples = 0;
  std::size_t violations_exp_growth = 0;    // |e^x - 1| <= |x| e^x
  std::size_t violations_exp_pair = 0;      // |e^-x - e^-y| <= |x-y| e^-min(x,y)
  std::size_t violations_exp_integral = 0;  // |e^{int f1} - e^{int f2}| <= e^{3T sup} int |f1-f2|
  std::size_t violations_tau = 0;           // |tau2 - tau1| <= Lip(g1)/min(g1) * int |v2 - v1|
  std::size_t tau_samples = 0;

  std::size_t total_violations() const {
    return violations_exp_growth + violations_exp_pair + violations_exp_integral + violations_tau;
  }
};

/// Random-sample verification of the elementary exponential inequalities; when
/// a trajectory pair and its model are supplied, also checks the hitting-time
/// difference bound on sampled starting points (with allowance for the step).
AppendixReport check_appendix_inequalities(std::uint64_t seed, std::size_t samples,
                                           const Trajectory* t1 = nullptr,
                                           const Trajectory* t2 = nullptr,
                                           const ModelCoefficients* model = nullptr,
                                           const StabilityConstants* constants = nullptr,
                                           double tau_allowance = 0.0);

}  // namespace mtlab
