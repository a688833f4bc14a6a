#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "mtlab/mtlab.h"

namespace {

struct Cleanup {
  mtlab_measure* measures[8] = {};
  mtlab_grid* grids[4] = {};
  mtlab_model* models[4] = {};
  mtlab_trajectory* trajectories[4] = {};
  int nm = 0, ng = 0, no = 0, nt = 0;
  ~Cleanup() {
    for (int i = 0; i < nm; ++i) mtlab_measure_free(measures[i]);
    for (int i = 0; i < ng; ++i) mtlab_grid_free(grids[i]);
    for (int i = 0; i < no; ++i) mtlab_model_free(models[i]);
    for (int i = 0; i < nt; ++i) mtlab_trajectory_free(trajectories[i]);
  }
  mtlab_measure** measure() { return &measures[nm++]; }
  mtlab_grid** grid() { return &grids[ng++]; }
  mtlab_model** model() { return &models[no++]; }
  mtlab_trajectory** trajectory() { return &trajectories[nt++]; }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  mtlab_string_free(s);
  return out;
}

const char* kModel = R"({
  "grid": [0, 1, 2],
  "g1": 1.0,
  "c": [0.0, 1.0, 0.0],
  "initial_measures": {"mu": [[1.0, 1.0]], "mu_eps": [[0.8, 1.0]]},
  "solver": {"dt": 0.0005, "T": 0.2}
})";

}  // namespace

TEST_CASE("measures through the C boundary") {
  Cleanup h;
  const double pos[] = {2.0, 2.0, 0.0};
  const double w[] = {0.5, 0.5, 1.0};
  REQUIRE(mtlab_measure_create(pos, w, 3, h.measure()) == MTLAB_OK);
  mtlab_measure* m = h.measures[0];
  CHECK(mtlab_measure_size(m) == 2);
  CHECK(mtlab_measure_total_variation(m) == 2.0);
  CHECK(mtlab_measure_mass_at(m, 2.0) == 1.0);
  double p = 0.0, weight = 0.0;
  REQUIRE(mtlab_measure_atom(m, 0, &p, &weight) == MTLAB_OK);
  CHECK(p == 0.0);
  CHECK(mtlab_measure_atom(m, 5, &p, &weight) == MTLAB_ERR_OUT_OF_RANGE);

  char* json = nullptr;
  REQUIRE(mtlab_measure_to_json(m, &json) == MTLAB_OK);
  REQUIRE(mtlab_measure_from_json(take(json).c_str(), h.measure()) == MTLAB_OK);
  CHECK(mtlab_measure_total_variation(h.measures[1]) == 2.0);
}

TEST_CASE("error reporting carries a message") {
  const double pos[] = {0.0};
  const double w[] = {-1.0};
  mtlab_measure* out = nullptr;
  CHECK(mtlab_measure_create(pos, w, 1, &out) == MTLAB_ERR_NEGATIVE_WEIGHT);
  CHECK(std::string(mtlab_last_error()).find("negative") != std::string::npos);
  CHECK(out == nullptr);
  CHECK(std::string(mtlab_status_name(MTLAB_ERR_UNEQUAL_MASS)) == "unequal-mass");
}

TEST_CASE("metrics and oracle through the C boundary") {
  Cleanup h;
  const double points[] = {0.0, 1.0, 2.0};
  REQUIRE(mtlab_grid_create(points, 3, h.grid()) == MTLAB_OK);
  REQUIRE(mtlab_measure_from_json("[[1.0, 1.0]]", h.measure()) == MTLAB_OK);
  REQUIRE(mtlab_measure_from_json("[[1.25, 1.0]]", h.measure()) == MTLAB_OK);
  REQUIRE(mtlab_measure_from_json("[[0.75, 1.0]]", h.measure()) == MTLAB_OK);
  mtlab_measure* center = h.measures[0];
  mtlab_measure* right = h.measures[1];
  mtlab_measure* left = h.measures[2];

  double v = 0.0;
  CHECK(mtlab_metric(MTLAB_METRIC_MT, center, right, h.grids[0], &v) == MTLAB_OK);
  CHECK(v == 2.0);
  CHECK(mtlab_metric(MTLAB_METRIC_MT, center, left, h.grids[0], &v) == MTLAB_OK);
  CHECK(v == 0.25);
  CHECK(mtlab_metric(MTLAB_METRIC_W1, center, left, nullptr, &v) == MTLAB_OK);
  CHECK(v == 0.25);
  CHECK(mtlab_metric_oracle(MTLAB_METRIC_FLAT, center, left, nullptr, &v) == MTLAB_OK);
  CHECK(std::fabs(v - 0.25) <= 1e-9);
  CHECK(mtlab_metric(MTLAB_METRIC_MT, center, right, nullptr, &v) == MTLAB_ERR_INVALID_ARGUMENT);

  const double heavy_w[] = {2.0};
  const double heavy_p[] = {0.0};
  REQUIRE(mtlab_measure_create(heavy_p, heavy_w, 1, h.measure()) == MTLAB_OK);
  CHECK(mtlab_metric(MTLAB_METRIC_W1, center, h.measures[3], nullptr, &v) ==
        MTLAB_ERR_UNEQUAL_MASS);
}

TEST_CASE("model, simulation and constants through the C boundary") {
  Cleanup h;
  REQUIRE(mtlab_model_from_json(kModel, h.model()) == MTLAB_OK);
  mtlab_model* model = h.models[0];
  CHECK(mtlab_model_measure_count(model) == 2);
  char* name = nullptr;
  REQUIRE(mtlab_model_measure_name(model, 0, &name) == MTLAB_OK);
  CHECK(take(name) == "mu");
  REQUIRE(mtlab_model_measure(model, "mu", h.measure()) == MTLAB_OK);
  REQUIRE(mtlab_model_measure(model, "mu_eps", h.measure()) == MTLAB_OK);
  CHECK(mtlab_model_measure(model, "nope", h.measure()) == MTLAB_ERR_CONFIG_INVALID);

  double dt = 0.0, horizon = 0.0, merge = 0.0;
  int quad = 0;
  REQUIRE(mtlab_model_solver(model, &dt, &horizon, &quad, &merge) == MTLAB_OK);
  CHECK(dt == 0.0005);
  CHECK(horizon == 0.2);

  REQUIRE(mtlab_simulate(model, h.measures[0], horizon, dt, 1, 0.0, h.trajectory()) == MTLAB_OK);
  mtlab_trajectory* traj = h.trajectories[0];
  CHECK(mtlab_trajectory_steps(traj) == 401);
  CHECK(mtlab_trajectory_time(traj, 400) == doctest::Approx(0.2));
  CHECK(mtlab_trajectory_total_mass(traj, 400) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mtlab_trajectory_v(traj, 400) == 0.0);
  REQUIRE(mtlab_trajectory_snapshot(traj, 400, h.measure()) == MTLAB_OK);
  CHECK(mtlab_measure_mass_at(h.measures[2 + 1], 1.0) ==
        doctest::Approx(std::exp(-0.2)).epsilon(1e-12));

  mtlab_constants k{};
  REQUIRE(mtlab_stability_constants(model, h.measures[0], h.measures[1], &k) == MTLAB_OK);
  CHECK(k.t_max == 1.0);
  CHECK(k.kappa == 3.0);
  CHECK(k.it2 == 3);
  CHECK(k.fixed_step == 1);

  double c1 = 0.0;
  REQUIRE(mtlab_local_c1(model, h.measures[0], h.measures[1], 0.2, &c1) == MTLAB_OK);
  CHECK(c1 == doctest::Approx(2.2).epsilon(1e-12));

  double factor = 0.0;
  REQUIRE(mtlab_global_factor(model, h.measures[0], h.measures[1], 1e-9, &factor) == MTLAB_OK);
  CHECK(factor == doctest::Approx(27.0).epsilon(1e-9));  // exp(alpha) as t -> 0+
}

TEST_CASE("assumption violation surfaces as a status") {
  mtlab_model* out = nullptr;
  CHECK(mtlab_model_from_json(R"({"grid":[0,1,2],"c":[0.0,0.0,0.7]})", &out) ==
        MTLAB_ERR_ASSUMPTION_VIOLATED);
  CHECK(std::string(mtlab_last_error()).find("c_N=0") != std::string::npos);
}

TEST_CASE("closed-form pairs through the C boundary") {
  Cleanup h;
  const double points[] = {0.0, 1.0, 2.0};
  REQUIRE(mtlab_grid_create(points, 3, h.grid()) == MTLAB_OK);
  mtlab_example_params params{0.1, 0.0, 0.0, 0.0, 0};
  REQUIRE(mtlab_example_pair(MTLAB_EXAMPLE_DRIFT, 0.3, &params, h.grids[0], h.measure(),
                             h.measure()) == MTLAB_OK);
  double v = 0.0;
  CHECK(mtlab_metric(MTLAB_METRIC_FLAT, h.measures[0], h.measures[1], nullptr, &v) == MTLAB_OK);
  CHECK(v == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("reproduction checks are listable and runnable") {
  REQUIRE(mtlab_repro_count() >= 7);
  char* name = nullptr;
  REQUIRE(mtlab_repro_name(0, &name) == MTLAB_OK);
  CHECK(take(name) == "table2-values");

  int pass = -1;
  char* detail = nullptr;
  REQUIRE(mtlab_repro_run("table2-values", 1, 2, 0.0, &pass, &detail) == MTLAB_OK);
  CHECK(pass == 1);
  CHECK_FALSE(take(detail).empty());

  REQUIRE(mtlab_repro_run("table2-values", 1, 2, 0.5, &pass, nullptr) == MTLAB_OK);
  CHECK(pass == 0);  // injected skew must trip the values
  CHECK(mtlab_repro_run("no-such-check", 1, 1, 0.0, &pass, nullptr) ==
        MTLAB_ERR_INVALID_ARGUMENT);
}
