#include "mtlab/repro.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "mtlab/closed_form.hpp"
#include "mtlab/stability.hpp"

namespace mtlab::repro {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, 16);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> cursor{0};
  std::mutex mu;
  std::exception_ptr first_error;
  auto run = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Family {
  std::string name;
  ModelCoefficients model;
};

std::vector<Family> sweep_families() {
  std::vector<Family> out;
  {
    ModelCoefficients m{BreakpointGrid({0.0, 1.0, 2.0})};
    m.c[0] = PiecewiseLinearFn::constant(0.4);
    m.c[1] = PiecewiseLinearFn::constant(0.6);
    out.push_back({"const-speed", std::move(m)});
  }
  {
    ModelCoefficients m{BreakpointGrid({0.0, 1.0, 2.0})};
    m.g1 = PiecewiseLinearFn({0.0, 2.0}, {0.6, 0.9});
    m.c[0] = PiecewiseLinearFn({0.0, 2.0}, {0.5, 0.3});
    m.c[1] = PiecewiseLinearFn({0.0, 2.0}, {0.4, 0.6});
    out.push_back({"speed-ramp", std::move(m)});
  }
  {
    ModelCoefficients m{BreakpointGrid({0.0, 0.8, 2.0})};
    m.g1 = PiecewiseLinearFn({0.0, 1.0, 3.0}, {1.0, 0.7, 0.7});
    m.c[0] = PiecewiseLinearFn({0.0, 1.0}, {0.2, 0.5});
    m.c[1] = PiecewiseLinearFn({0.0, 3.0}, {0.7, 0.4});
    out.push_back({"slowing", std::move(m)});
  }
  return out;
}

std::vector<Family> unit_speed_families() {
  std::vector<Family> out;
  {
    ModelCoefficients m{BreakpointGrid({0.0, 1.0, 2.0})};
    m.c[0] = PiecewiseLinearFn::constant(0.4);
    m.c[1] = PiecewiseLinearFn::constant(0.6);
    out.push_back({"unit-const", std::move(m)});
  }
  {
    ModelCoefficients m{BreakpointGrid({0.0, 1.0, 2.0})};
    m.c[0] = PiecewiseLinearFn({0.0, 2.0}, {0.8, 0.5});
    m.c[1] = PiecewiseLinearFn::constant(0.3);
    out.push_back({"unit-ramped-c", std::move(m)});
  }
  {
    ModelCoefficients m{BreakpointGrid({0.0, 1.0, 2.0})};
    m.c[1] = PiecewiseLinearFn::constant(1.0);
    out.push_back({"unit-strong-c1", std::move(m)});
  }
  return out;
}

// A base measure plus a small same-interval perturbation of positions and
// weights; optionally the same extra atom at x_N on both sides so the
// coupling v starts positive.
std::pair<DiscreteMeasure, DiscreteMeasure> perturbed_pair(std::mt19937_64& rng,
                                                           const BreakpointGrid& grid,
                                                           bool weight_last_interval) {
  const auto& pts = grid.points();
  std::vector<Atom> base, moved;
  int n_atoms = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < n_atoms; ++i) {
    std::size_t seg = weight_last_interval && i == 0
                          ? grid.segment_count()
                          : 1 + static_cast<std::size_t>(rng() % grid.segment_count());
    double lo = pts[seg - 1], hi = pts[seg];
    double gap = hi - lo;
    double pos = uniform(rng, lo + 0.05 * gap, hi - 0.05 * gap);
    double w = uniform(rng, 0.1, 1.0);
    double shift = 0.02 * gap * uniform(rng, -1.0, 1.0);
    double pos2 = std::clamp(pos + shift, lo + 0.02 * gap, hi - 0.02 * gap);
    double w2 = w * (1.0 + 0.05 * uniform(rng, -1.0, 1.0));
    base.push_back({pos, w});
    moved.push_back({pos2, w2});
  }
  if (rng() % 2 == 0) {
    double w = uniform(rng, 0.2, 0.8);
    base.push_back({pts.back(), w});
    moved.push_back({pts.back(), w});
  }
  return {DiscreteMeasure::make(std::move(base)), DiscreteMeasure::make(std::move(moved))};
}

double skewed(double value, const Options& opt) { return value + opt.metric_skew; }

const BreakpointGrid& unit_grid() {
  static const BreakpointGrid grid({0.0, 1.0, 2.0});
  return grid;
}

}  // namespace

CheckResult check_table2(const Options& opt) {
  Timer timer;
  const BreakpointGrid& grid = unit_grid();
  const double eps = 0.25;
  DiscreteMeasure center = DiscreteMeasure::make({{1.0, 1.0}});
  DiscreteMeasure right = DiscreteMeasure::make({{1.0 + eps, 1.0}});
  DiscreteMeasure left = DiscreteMeasure::make({{1.0 - eps, 1.0}});

  struct Case {
    const char* label;
    double value;
    double expected;
  };
  const Case cases[] = {
      {"norm(right)", skewed(norm_distance(center, right), opt), 2.0},
      {"norm(left)", skewed(norm_distance(center, left), opt), 2.0},
      {"mt(right)", skewed(mt_metric(center, right, grid), opt), 2.0},
      {"mt(left)", skewed(mt_metric(center, left, grid), opt), eps},
      {"w1(right)", skewed(wasserstein1(center, right), opt), eps},
      {"w1(left)", skewed(wasserstein1(center, left), opt), eps},
      {"flat(right)", skewed(flat_metric(center, right), opt), eps},
      {"flat(left)", skewed(flat_metric(center, left), opt), eps},
  };
  double worst = 0.0;
  for (const Case& c : cases) worst = std::max(worst, std::fabs(c.value - c.expected));
  bool pass = worst <= 1e-12;
  return {"table2-values", pass, fmt("max |error| = %.3e (tol 1e-12)", worst), timer.seconds()};
}

CheckResult check_perturbation_values(const Options& opt) {
  Timer timer;
  const double eps = 0.1;
  DiscreteMeasure a = DiscreteMeasure::make({{0.0, 1.0}});
  DiscreteMeasure b = DiscreteMeasure::make({{eps, 1.0}});
  double e1 = std::fabs(skewed(norm_distance(a, b), opt) - 2.0);
  double e2 = std::fabs(skewed(flat_metric(a, b), opt) - eps);
  double e3 = std::fabs(skewed(wasserstein1(a, b), opt) - eps);
  double worst = std::max({e1, e2, e3});
  return {"perturbation-values", worst <= 1e-12, fmt("max |error| = %.3e (tol 1e-12)", worst),
          timer.seconds()};
}

CheckResult check_drift_series(const Options& opt) {
  Timer timer;
  const BreakpointGrid& grid = unit_grid();
  const double eps = 0.1;
  double worst = 0.0;
  for (int i = 0; i <= 5; ++i) {
    double t = 0.1 * i;
    auto [m1, m2] = eval_example_1_1(t, eps, grid);
    worst = std::max(worst, std::fabs(skewed(flat_metric(m1, m2), opt) - (t + eps)));
  }
  auto [m1, m2] = eval_example_1_1(0.0, eps, grid);
  worst = std::max(worst, std::fabs(skewed(mt_metric(m1, m2, grid), opt) - 2.0));
  return {"drift-series", worst <= 1e-12,
          fmt("flat tracks t + eps, MT(0) = 2; max |error| = %.3e", worst), timer.seconds()};
}

CheckResult check_outflow_pair(const Options& opt) {
  Timer timer;
  const BreakpointGrid& grid = unit_grid();
  const double c1 = 1.0, eps = 0.2;
  const double expected = 2.0 * (1.0 - std::exp(-c1 * eps));

  auto [analytic1, analytic2] = eval_example_4_5(eps, eps, c1, 2000, grid);
  double rho_analytic = skewed(mt_metric(analytic1, analytic2, grid), opt);
  double rel_analytic = std::fabs(rho_analytic - expected) / expected;

  ModelCoefficients model = example_model_4_5(c1, grid);
  const double dt = eps / 400.0;
  Trajectory t1 = simulate(DiscreteMeasure::make({{1.0, 1.0}}), model, eps, dt);
  Trajectory t2 = simulate(DiscreteMeasure::make({{1.0 - eps, 1.0}}), model, eps, dt);
  double rho_sim = skewed(mt_metric(t1.snapshots.back(), t2.snapshots.back(), grid), opt);
  double rel_sim = std::fabs(rho_sim - expected) / expected;

  bool pass = rel_analytic <= 1e-3 && rel_sim <= 5e-2;
  return {"outflow-pair", pass,
          fmt("rel err: analytic %.3e (tol 1e-3), simulated %.3e (tol 5e-2)", rel_analytic,
              rel_sim),
          timer.seconds()};
}

CheckResult check_speed_coupled_pair(const Options& opt) {
  Timer timer;
  BreakpointGrid grid({0.0, 1.0, 2.6});
  const double g_low = 0.5, eps = 0.05, y = 1.3;
  const double t_bar = eps / g_low;
  const double expected_ratio = 1.0 / g_low - 1.0;

  auto [a0, b0] = eval_example_4_6(0.0, eps, g_low, y, grid);
  auto [a1, b1] = eval_example_4_6(t_bar, eps, g_low, y, grid);
  double ratio_analytic = skewed(mt_metric(a1, b1, grid), opt) / mt_metric(a0, b0, grid);
  double err_analytic = std::fabs(ratio_analytic - expected_ratio);

  ModelCoefficients model = example_model_4_6(g_low, grid);
  const double dt = t_bar / 250.0;
  Trajectory t1 = simulate(a0, model, t_bar, dt);
  Trajectory t2 = simulate(b0, model, t_bar, dt);
  double ratio_sim = skewed(mt_metric(t1.snapshots.back(), t2.snapshots.back(), grid), opt) /
                     mt_metric(t1.snapshots.front(), t2.snapshots.front(), grid);
  double err_sim = std::fabs(ratio_sim - expected_ratio);

  bool pass = err_analytic <= 1e-9 && err_sim <= 5e-2;
  return {"speed-coupled-pair", pass,
          fmt("ratio err: analytic %.3e (tol 1e-9), simulated %.3e (tol 5e-2)", err_analytic,
              err_sim),
          timer.seconds()};
}

CheckResult check_global_sweep(const Options& opt) {
  Timer timer;
  const int pairs_per_family = 20;
  std::vector<Family> families = sweep_families();

  struct Run {
    const Family* family;
    DiscreteMeasure m1, m2;
  };
  std::vector<Run> runs;
  std::mt19937_64 rng(opt.seed);
  for (const Family& fam : families)
    for (int i = 0; i < pairs_per_family; ++i) {
      auto [m1, m2] = perturbed_pair(rng, fam.model.grid, i % 3 == 0);
      runs.push_back({&fam, std::move(m1), std::move(m2)});
    }

  std::vector<std::size_t> violations(runs.size(), 0);
  std::vector<double> min_margin(runs.size(), 0.0);
  parallel_for(runs.size(), opt.workers, [&](std::size_t i) {
    const Run& run = runs[i];
    const ModelCoefficients& model = run.family->model;
    const double t_int = model.grid.last_gap() / model.sup_g1();
    const double dt = t_int / 500.0;
    const double horizon = 3.0 * t_int;
    const double merge_tol = 2.0 * model.sup_g1() * dt;

    Trajectory t1 = simulate(run.m1, model, horizon, dt, 1, merge_tol, 1e-14);
    Trajectory t2 = simulate(run.m2, model, horizon, dt, 1, merge_tol, 1e-14);
    StabilityConstants constants = compute_constants(model, run.m1, run.m2);

    const double allow_c = 10.0 * (constants.tv1 + constants.tv2 + 1.0) *
                           std::max(1.0, constants.sup_g1);
    std::size_t stride = std::max<std::size_t>(1, t1.steps() / 125);
    BoundReport report = check_global_bound(t1, t2, model.grid, constants, stride,
                                            1e-9 + allow_c * dt);
    violations[i] = report.violations;
    double m = std::numeric_limits<double>::infinity();
    for (const BoundRow& row : report.rows) m = std::min(m, row.margin);
    min_margin[i] = m;
  });

  std::size_t total = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    total += violations[i];
    worst_margin = std::min(worst_margin, min_margin[i]);
  }
  return {"global-bound-sweep", total == 0,
          fmt("%.0f runs, %.0f violations, min margin %.3e", static_cast<double>(runs.size()),
              static_cast<double>(total), worst_margin),
          timer.seconds()};
}

CheckResult check_nonlinear_sweep(const Options& opt) {
  Timer timer;
  const int pairs_per_family = 20;
  std::vector<Family> families = unit_speed_families();

  struct Run {
    const Family* family;
    DiscreteMeasure m1, m2;
  };
  std::vector<Run> runs;
  std::mt19937_64 rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
  for (const Family& fam : families)
    for (int i = 0; i < pairs_per_family; ++i) {
      auto [m1, m2] = perturbed_pair(rng, fam.model.grid, true);
      runs.push_back({&fam, std::move(m1), std::move(m2)});
    }

  std::vector<int> violated(runs.size(), 0);
  std::vector<double> utilization(runs.size(), 0.0);
  parallel_for(runs.size(), opt.workers, [&](std::size_t i) {
    const Run& run = runs[i];
    const ModelCoefficients& model = run.family->model;
    const double t_max = single_pass_horizon(model.grid, model.g1);
    const double t_int = model.grid.last_gap() / model.sup_g1();
    const double dt = t_int / 500.0;
    const double horizon = 0.9 * t_max;

    Trajectory t1 = simulate(run.m1, model, horizon, dt);
    Trajectory t2 = simulate(run.m2, model, horizon, dt);
    StabilityConstants constants = compute_constants(model, run.m1, run.m2);
    const double allow = 10.0 * (constants.tv1 + constants.tv2 + 1.0) * t1.dt;
    NonlinearReport report = check_nonlinear_estimate(t1, t2, model.grid, constants, allow);
    violated[i] = report.violated ? 1 : 0;
    if (report.local_applicable && report.bound_local > 0.0)
      utilization[i] = report.integral_v_diff / report.bound_local;
  });

  int total = 0;
  double max_util = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    total += violated[i];
    max_util = std::max(max_util, utilization[i]);
  }
  return {"nonlinear-estimate-sweep", total == 0,
          fmt("%.0f runs, %.0f violations, max bound utilization %.3f",
              static_cast<double>(runs.size()), static_cast<double>(total), max_util),
          timer.seconds()};
}

std::vector<std::string> check_names() {
  return {"table2-values",      "perturbation-values", "drift-series",
          "outflow-pair",       "speed-coupled-pair",  "global-bound-sweep",
          "nonlinear-estimate-sweep"};
}

CheckResult run_check(const std::string& name, const Options& opt) {
  if (name == "table2-values") return check_table2(opt);
  if (name == "perturbation-values") return check_perturbation_values(opt);
  if (name == "drift-series") return check_drift_series(opt);
  if (name == "outflow-pair") return check_outflow_pair(opt);
  if (name == "speed-coupled-pair") return check_speed_coupled_pair(opt);
  if (name == "global-bound-sweep") return check_global_sweep(opt);
  if (name == "nonlinear-estimate-sweep") return check_nonlinear_sweep(opt);
  fail(ErrorCode::InvalidArgument, "unknown reproduction check: " + name);
}

std::vector<CheckResult> run_all(const Options& opt) {
  std::vector<CheckResult> out;
  for (const std::string& name : check_names()) out.push_back(run_check(name, opt));
  return out;
}

}  // namespace mtlab::repro
