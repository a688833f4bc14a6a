#include <doctest.h>

#include "mtlab/model.hpp"

using namespace mtlab;

namespace {

const char* kFullModel = R"({
  "grid": [0.0, 1.0, 2.0],
  "g1": {"knots": [0.0, 2.0], "values": [0.8, 1.2]},
  "p1": 0.3,
  "p2": [1.0, {"knots": [1.0, 2.0], "values": [0.5, 0.0]}],
  "c": [0.3, {"knots": [0.0, 2.0], "values": [0.4, 0.2]}, 0.0],
  "initial_measures": {"mu1": [[0.5, 0.6], [1.5, 0.4]], "mu2": [[0.55, 0.6], [1.5, 0.45]]},
  "solver": {"dt": 0.002, "T": 3.0, "quad_particles_per_step": 2, "merge_tolerance": 1e-6}
})";

}  // namespace

TEST_CASE("full model file parses") {
  ModelFile file = load_model_file(kFullModel);
  CHECK(file.model.grid.points() == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(file.model.g1(0.0) == 0.8);
  CHECK(file.model.g1(1.0) == doctest::Approx(1.0));
  CHECK(file.model.c[0](5.0) == 0.3);
  CHECK(file.model.c[2].is_zero());
  CHECK(file.model.sup_g1() == 1.2);
  CHECK(file.model.lip_g1() == doctest::Approx(0.2));
  CHECK(file.model.sup_c() == 0.4);
  REQUIRE(file.initial_measures.size() == 2);
  CHECK(file.initial_measures[0].first == "mu1");
  CHECK(file.measure("mu2").total_variation() == doctest::Approx(1.05));
  CHECK(file.solver.dt == 0.002);
  CHECK(file.solver.quad_particles_per_step == 2);
}

TEST_CASE("p2 uses the interval-closing convention at grid points") {
  ModelFile file = load_model_file(kFullModel);
  const ModelCoefficients& m = file.model;
  CHECK(m.p2_at(0.5) == 1.0);
  CHECK(m.p2_at(1.0) == 1.0);   // x_1 closes the first interval
  CHECK(m.p2_at(1.5) == 0.25);
  CHECK(m.p2_at(2.0) == 0.0);   // x_2 closes the second interval, table value 0 there
  CHECK(m.p2_at(0.0) == 0.0);   // x_0 closes no interval inside the support
  CHECK(m.p2_at(-1.0) == 0.0);
  CHECK(m.p2_at(3.0) == 0.0);
  CHECK_FALSE(m.p_is_zero());
}

TEST_CASE("assumption violations are reported by name") {
  auto expect_violation = [](const char* json, const char* token) {
    try {
      load_model_file(json);
      FAIL("expected AssumptionViolated for " << token);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::AssumptionViolated);
      CHECK(std::string(e.what()).find(token) != std::string::npos);
    }
  };
  expect_violation(R"({"grid":[0,1,2],"c":[0.0,0.0,0.5]})", "c_N=0");
  expect_violation(R"({"grid":[0,1,2],"c":[-0.1,0.0,0.0]})", "c_i>=0");
  expect_violation(R"({"grid":[0,1,2],"g1":0.0})", "g1>0");
}

TEST_CASE("structural problems are config errors") {
  CHECK_THROWS_AS(load_model_file("{"), Error);
  CHECK_THROWS_AS(load_model_file(R"({"grid":[0,1,2],"c":[0.0,0.0]})"), Error);
  CHECK_THROWS_AS(load_model_file(R"({"grid":[0,1,2],"p2":[1.0]})"), Error);
  CHECK_THROWS_AS(load_model_file(R"({"grid":[2,1,0]})"), Error);
}

TEST_CASE("min_g1_on takes the exact table infimum over the reachable range") {
  ModelCoefficients constant{BreakpointGrid({0.0, 1.0})};
  CHECK(constant.min_g1_on(10.0) == 1.0);

  ModelCoefficients increasing{BreakpointGrid({0.0, 1.0})};
  increasing.g1 = PiecewiseLinearFn({0.0, 9.0}, {1.0, 10.0});
  CHECK(increasing.min_g1_on(2.0) == 1.0);

  ModelCoefficients dipped{BreakpointGrid({0.0, 1.0})};
  dipped.g1 = PiecewiseLinearFn({0.0, 1.0, 3.0}, {2.0, 0.5, 3.0});
  CHECK(dipped.min_g1_on(3.0) == 0.5);

  ModelCoefficients vanishing{BreakpointGrid({0.0, 1.0})};
  vanishing.g1 = PiecewiseLinearFn({0.0, 1.0}, {1.0, 0.0});
  try {
    vanishing.min_g1_on(2.0);
    FAIL("expected NonPositiveSpeed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveSpeed);
  }
}

TEST_CASE("serialize -> parse -> serialize is stable") {
  ModelFile file = load_model_file(kFullModel);
  std::string once = model_file_to_json(file);
  std::string twice = model_file_to_json(load_model_file(once));
  CHECK(once == twice);
}

TEST_CASE("piecewise linear constants are exact over segments") {
  PiecewiseLinearFn f({0.0, 1.0, 2.0}, {1.0, 3.0, 2.0});
  CHECK(f.sup() == 3.0);
  CHECK(f.inf() == 1.0);
  CHECK(f.lipschitz() == 2.0);
  CHECK(f(-1.0) == 1.0);
  CHECK(f(5.0) == 2.0);
  CHECK(f(0.5) == 2.0);
  CHECK(f.inf_on(1.5, 5.0) == 2.0);
  CHECK(f.sup_on(0.5, 1.2) == 3.0);
}
