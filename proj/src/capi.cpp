#include "mtlab/mtlab.h"

#include <cstring>
#include <new>
#include <string>

#include "mtlab/closed_form.hpp"
#include "mtlab/repro.hpp"
#include "mtlab/stability.hpp"

using namespace mtlab;

struct mtlab_measure {
  DiscreteMeasure value;
};
struct mtlab_grid {
  BreakpointGrid value;
};
struct mtlab_model {
  ModelFile value;
};
struct mtlab_trajectory {
  Trajectory value;
};

namespace {

thread_local std::string t_last_error;

mtlab_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return MTLAB_ERR_INVALID_ARGUMENT;
    case ErrorCode::NegativeWeight: return MTLAB_ERR_NEGATIVE_WEIGHT;
    case ErrorCode::UnequalMass: return MTLAB_ERR_UNEQUAL_MASS;
    case ErrorCode::TooLarge: return MTLAB_ERR_TOO_LARGE;
    case ErrorCode::OutOfRange: return MTLAB_ERR_OUT_OF_RANGE;
    case ErrorCode::BranchBeforeArrival: return MTLAB_ERR_BRANCH_BEFORE_ARRIVAL;
    case ErrorCode::HorizonExceeded: return MTLAB_ERR_HORIZON_EXCEEDED;
    case ErrorCode::InvalidStep: return MTLAB_ERR_INVALID_STEP;
    case ErrorCode::NonPositiveSpeed: return MTLAB_ERR_NON_POSITIVE_SPEED;
    case ErrorCode::DenominatorNonpositive: return MTLAB_ERR_DENOMINATOR_NONPOSITIVE;
    case ErrorCode::ConfigInvalid: return MTLAB_ERR_CONFIG_INVALID;
    case ErrorCode::AssumptionViolated: return MTLAB_ERR_ASSUMPTION_VIOLATED;
    case ErrorCode::ParseError: return MTLAB_ERR_PARSE;
  }
  return MTLAB_ERR_INTERNAL;
}

template <typename Fn>
mtlab_status guarded(Fn&& fn) {
  try {
    fn();
    return MTLAB_OK;
  } catch (const Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return MTLAB_ERR_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return MTLAB_ERR_INTERNAL;
  }
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mtlab_status require(bool ok, const char* message) {
  if (ok) return MTLAB_OK;
  t_last_error = message;
  return MTLAB_ERR_INVALID_ARGUMENT;
}

MetricKind kind_of(mtlab_metric_kind kind) {
  switch (kind) {
    case MTLAB_METRIC_NORM: return MetricKind::NormDistance;
    case MTLAB_METRIC_W1: return MetricKind::Wasserstein1;
    case MTLAB_METRIC_FLAT: return MetricKind::Flat;
    case MTLAB_METRIC_MT: return MetricKind::MeasureTransmission;
  }
  fail(ErrorCode::InvalidArgument, "unknown metric kind");
}

}  // namespace

extern "C" {

const char* mtlab_version(void) { return "1.0.0"; }

const char* mtlab_status_name(mtlab_status status) {
  switch (status) {
    case MTLAB_OK: return "ok";
    case MTLAB_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case MTLAB_ERR_NEGATIVE_WEIGHT: return "negative-weight";
    case MTLAB_ERR_UNEQUAL_MASS: return "unequal-mass";
    case MTLAB_ERR_TOO_LARGE: return "too-large";
    case MTLAB_ERR_OUT_OF_RANGE: return "out-of-range";
    case MTLAB_ERR_BRANCH_BEFORE_ARRIVAL: return "branch-before-arrival";
    case MTLAB_ERR_HORIZON_EXCEEDED: return "horizon-exceeded";
    case MTLAB_ERR_INVALID_STEP: return "invalid-step";
    case MTLAB_ERR_NON_POSITIVE_SPEED: return "non-positive-speed";
    case MTLAB_ERR_DENOMINATOR_NONPOSITIVE: return "denominator-nonpositive";
    case MTLAB_ERR_CONFIG_INVALID: return "config-invalid";
    case MTLAB_ERR_ASSUMPTION_VIOLATED: return "assumption-violated";
    case MTLAB_ERR_PARSE: return "parse-error";
    case MTLAB_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* mtlab_last_error(void) { return t_last_error.c_str(); }

void mtlab_string_free(char* s) { delete[] s; }

mtlab_status mtlab_measure_create(const double* positions, const double* weights, size_t count,
                                  mtlab_measure** out) {
  if (auto bad = require(out && (count == 0 || (positions && weights)), "null argument")) return bad;
  return guarded([&] {
    std::vector<Atom> atoms(count);
    for (size_t i = 0; i < count; ++i) atoms[i] = {positions[i], weights[i]};
    *out = new mtlab_measure{DiscreteMeasure::make(std::move(atoms))};
  });
}

mtlab_status mtlab_measure_from_json(const char* json, mtlab_measure** out) {
  if (auto bad = require(json && out, "null argument")) return bad;
  return guarded([&] { *out = new mtlab_measure{measure_from_json(json)}; });
}

mtlab_status mtlab_measure_to_json(const mtlab_measure* m, char** out) {
  if (auto bad = require(m && out, "null argument")) return bad;
  return guarded([&] { *out = copy_string(measure_to_json(m->value)); });
}

size_t mtlab_measure_size(const mtlab_measure* m) { return m ? m->value.size() : 0; }

mtlab_status mtlab_measure_atom(const mtlab_measure* m, size_t index, double* position,
                                double* weight) {
  if (auto bad = require(m && position && weight, "null argument")) return bad;
  if (index >= m->value.size()) {
    t_last_error = "atom index out of range";
    return MTLAB_ERR_OUT_OF_RANGE;
  }
  *position = m->value.atoms()[index].pos;
  *weight = m->value.atoms()[index].weight;
  return MTLAB_OK;
}

double mtlab_measure_total_variation(const mtlab_measure* m) {
  return m ? m->value.total_variation() : 0.0;
}

double mtlab_measure_mass_at(const mtlab_measure* m, double x) {
  return m ? m->value.mass_at(x) : 0.0;
}

void mtlab_measure_free(mtlab_measure* m) { delete m; }

mtlab_status mtlab_grid_create(const double* points, size_t count, mtlab_grid** out) {
  if (auto bad = require(points && out, "null argument")) return bad;
  return guarded([&] {
    *out = new mtlab_grid{BreakpointGrid(std::vector<double>(points, points + count))};
  });
}

mtlab_status mtlab_grid_from_json(const char* json, mtlab_grid** out) {
  if (auto bad = require(json && out, "null argument")) return bad;
  return guarded([&] { *out = new mtlab_grid{grid_from_json(json)}; });
}

size_t mtlab_grid_size(const mtlab_grid* g) { return g ? g->value.points().size() : 0; }

double mtlab_grid_point(const mtlab_grid* g, size_t index) {
  return g && index < g->value.points().size() ? g->value.points()[index] : 0.0;
}

void mtlab_grid_free(mtlab_grid* g) { delete g; }

mtlab_status mtlab_metric(mtlab_metric_kind kind, const mtlab_measure* m1, const mtlab_measure* m2,
                          const mtlab_grid* grid, double* out) {
  if (auto bad = require(m1 && m2 && out, "null argument")) return bad;
  return guarded([&] {
    *out = metric(kind_of(kind), m1->value, m2->value, grid ? &grid->value : nullptr);
  });
}

mtlab_status mtlab_metric_oracle(mtlab_metric_kind kind, const mtlab_measure* m1,
                                 const mtlab_measure* m2, const mtlab_grid* grid, double* out) {
  if (auto bad = require(m1 && m2 && out, "null argument")) return bad;
  return guarded([&] {
    *out = metric_oracle(kind_of(kind), m1->value, m2->value, grid ? &grid->value : nullptr);
  });
}

mtlab_status mtlab_model_from_json(const char* json, mtlab_model** out) {
  if (auto bad = require(json && out, "null argument")) return bad;
  return guarded([&] { *out = new mtlab_model{load_model_file(json)}; });
}

mtlab_status mtlab_model_grid(const mtlab_model* m, mtlab_grid** out) {
  if (auto bad = require(m && out, "null argument")) return bad;
  return guarded([&] { *out = new mtlab_grid{m->value.model.grid}; });
}

size_t mtlab_model_measure_count(const mtlab_model* m) {
  return m ? m->value.initial_measures.size() : 0;
}

mtlab_status mtlab_model_measure_name(const mtlab_model* m, size_t index, char** out) {
  if (auto bad = require(m && out, "null argument")) return bad;
  if (index >= m->value.initial_measures.size()) {
    t_last_error = "measure index out of range";
    return MTLAB_ERR_OUT_OF_RANGE;
  }
  *out = copy_string(m->value.initial_measures[index].first);
  return MTLAB_OK;
}

mtlab_status mtlab_model_measure(const mtlab_model* m, const char* name, mtlab_measure** out) {
  if (auto bad = require(m && name && out, "null argument")) return bad;
  return guarded([&] { *out = new mtlab_measure{m->value.measure(name)}; });
}

mtlab_status mtlab_model_solver(const mtlab_model* m, double* dt, double* horizon,
                                int* quad_particles, double* merge_tolerance) {
  if (auto bad = require(m != nullptr, "null argument")) return bad;
  if (dt) *dt = m->value.solver.dt;
  if (horizon) *horizon = m->value.solver.horizon;
  if (quad_particles) *quad_particles = m->value.solver.quad_particles_per_step;
  if (merge_tolerance) *merge_tolerance = m->value.solver.merge_tolerance;
  return MTLAB_OK;
}

void mtlab_model_free(mtlab_model* m) { delete m; }

mtlab_status mtlab_simulate(const mtlab_model* model, const mtlab_measure* m0, double horizon,
                            double dt, int quad_particles_per_step, double merge_tolerance,
                            mtlab_trajectory** out) {
  if (auto bad = require(model && m0 && out, "null argument")) return bad;
  return guarded([&] {
    *out = new mtlab_trajectory{simulate(m0->value, model->value.model, horizon, dt,
                                         quad_particles_per_step, merge_tolerance,
                                         model->value.solver.drop_tolerance)};
  });
}

size_t mtlab_trajectory_steps(const mtlab_trajectory* t) { return t ? t->value.steps() : 0; }

double mtlab_trajectory_time(const mtlab_trajectory* t, size_t k) {
  return t && k < t->value.times.size() ? t->value.times[k] : 0.0;
}

double mtlab_trajectory_v(const mtlab_trajectory* t, size_t k) {
  return t && k < t->value.v_series.size() ? t->value.v_series[k] : 0.0;
}

double mtlab_trajectory_total_mass(const mtlab_trajectory* t, size_t k) {
  return t && k < t->value.snapshots.size() ? t->value.snapshots[k].total_variation() : 0.0;
}

size_t mtlab_trajectory_atom_count(const mtlab_trajectory* t, size_t k) {
  return t && k < t->value.snapshots.size() ? t->value.snapshots[k].size() : 0;
}

mtlab_status mtlab_trajectory_snapshot(const mtlab_trajectory* t, size_t k, mtlab_measure** out) {
  if (auto bad = require(t && out, "null argument")) return bad;
  if (k >= t->value.snapshots.size()) {
    t_last_error = "snapshot index out of range";
    return MTLAB_ERR_OUT_OF_RANGE;
  }
  return guarded([&] { *out = new mtlab_measure{t->value.snapshots[k]}; });
}

void mtlab_trajectory_free(mtlab_trajectory* t) { delete t; }

mtlab_status mtlab_stability_constants(const mtlab_model* model, const mtlab_measure* mu1,
                                       const mtlab_measure* mu2, mtlab_constants* out) {
  if (auto bad = require(model && mu1 && mu2 && out, "null argument")) return bad;
  return guarded([&] {
    StabilityConstants k = compute_constants(model->value.model, mu1->value, mu2->value);
    *out = {k.t_max, k.t_int, k.t_intmin, k.mass_step, k.it1,   k.it2,   k.kappa, k.alpha,
            k.beta,  k.fixed_step ? 1 : 0, k.min_g1,  k.sup_g1, k.sup_c, k.lip_g1, k.lip_c};
  });
}

mtlab_status mtlab_local_c1(const mtlab_model* model, const mtlab_measure* mu1,
                            const mtlab_measure* mu2, double T, double* out) {
  if (auto bad = require(model && mu1 && mu2 && out, "null argument")) return bad;
  return guarded(
      [&] { *out = local_growth_constant(model->value.model, mu1->value, mu2->value, T); });
}

mtlab_status mtlab_global_factor(const mtlab_model* model, const mtlab_measure* mu1,
                                 const mtlab_measure* mu2, double t, double* out) {
  if (auto bad = require(model && mu1 && mu2 && out, "null argument")) return bad;
  return guarded([&] {
    *out = compute_constants(model->value.model, mu1->value, mu2->value).global_factor(t);
  });
}

mtlab_status mtlab_example_pair(mtlab_example_id id, double t, const mtlab_example_params* params,
                                const mtlab_grid* grid, mtlab_measure** out1,
                                mtlab_measure** out2) {
  if (auto bad = require(params && grid && out1 && out2, "null argument")) return bad;
  return guarded([&] {
    std::pair<DiscreteMeasure, DiscreteMeasure> pair;
    switch (id) {
      case MTLAB_EXAMPLE_DRIFT:
        pair = eval_example_1_1(t, params->eps, grid->value);
        break;
      case MTLAB_EXAMPLE_OUTFLOW:
        pair = eval_example_4_5(t, params->eps, params->c1, params->quadrature_atoms, grid->value);
        break;
      case MTLAB_EXAMPLE_SPEED_COUPLED:
        pair = eval_example_4_6(t, params->eps, params->g_low, params->y, grid->value);
        break;
      default:
        fail(ErrorCode::InvalidArgument, "unknown example id");
    }
    *out1 = new mtlab_measure{std::move(pair.first)};
    *out2 = new mtlab_measure{std::move(pair.second)};
  });
}

size_t mtlab_repro_count(void) { return repro::check_names().size(); }

mtlab_status mtlab_repro_name(size_t index, char** out) {
  if (auto bad = require(out != nullptr, "null argument")) return bad;
  auto names = repro::check_names();
  if (index >= names.size()) {
    t_last_error = "check index out of range";
    return MTLAB_ERR_OUT_OF_RANGE;
  }
  *out = copy_string(names[index]);
  return MTLAB_OK;
}

mtlab_status mtlab_repro_run(const char* name, uint64_t seed, int workers, double metric_skew,
                             int* pass_out, char** detail_out) {
  if (auto bad = require(name && pass_out, "null argument")) return bad;
  return guarded([&] {
    repro::Options opt;
    opt.seed = seed;
    opt.workers = workers;
    opt.metric_skew = metric_skew;
    repro::CheckResult result = repro::run_check(name, opt);
    *pass_out = result.pass ? 1 : 0;
    if (detail_out) *detail_out = copy_string(result.detail);
  });
}

}  // extern "C"
