#include <doctest.h>

#include <cmath>
#include <random>

#include "mtlab/metrics.hpp"
#include "support.hpp"

using namespace mtlab;
using testsupport::normalized;
using testsupport::random_measure;
using testsupport::uniform;

namespace {

DiscreteMeasure dirac(double x, double w = 1.0) { return DiscreteMeasure::make({{x, w}}); }

const BreakpointGrid& grid012() {
  static const BreakpointGrid g({0.0, 1.0, 2.0});
  return g;
}

}  // namespace

TEST_CASE("norm distance") {
  CHECK(norm_distance(dirac(0.0), dirac(0.25)) == 2.0);
  std::mt19937_64 rng(3);
  DiscreteMeasure m = random_measure(rng, 5, -1.0, 1.0);
  CHECK(norm_distance(m, m) == 0.0);
  CHECK(norm_distance(dirac(0.0, 2.0), dirac(0.0, 1.0)) == 1.0);
}

TEST_CASE("wasserstein1 closed cases") {
  CHECK(wasserstein1(dirac(0.0), dirac(0.25)) == 0.25);
  DiscreteMeasure m = DiscreteMeasure::make({{0.0, 0.4}, {1.0, 0.6}});
  CHECK(wasserstein1(m, m) == 0.0);
  // Split mass re-centered: transporting 0.5 from each side costs 1.0 total.
  DiscreteMeasure split = DiscreteMeasure::make({{0.0, 0.5}, {2.0, 0.5}});
  CHECK(wasserstein1(split, dirac(1.0)) == 1.0);
}

TEST_CASE("wasserstein1 rejects unequal masses") {
  try {
    wasserstein1(dirac(0.0, 1.0), dirac(0.0, 2.0));
    FAIL("expected UnequalMass");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnequalMass);
  }
}

TEST_CASE("flat metric closed cases") {
  CHECK(flat_metric(dirac(0.0), dirac(0.25)) == 0.25);
  CHECK(flat_metric(dirac(0.0), dirac(5.0)) == 2.0);  // far atoms saturate |psi| <= 1
  CHECK(flat_metric(dirac(0.0), DiscreteMeasure{}) == 1.0);
}

TEST_CASE("mt metric closed cases") {
  const BreakpointGrid& grid = grid012();
  CHECK(mt_metric(dirac(1.0), dirac(1.25), grid) == 2.0);
  CHECK(mt_metric(dirac(1.0), dirac(0.75), grid) == 0.25);
  DiscreteMeasure m = DiscreteMeasure::make({{0.3, 0.5}, {1.5, 0.5}});
  CHECK(mt_metric(m, m, grid) == 0.0);
}

TEST_CASE("mt metric endpoint convention at every interior point") {
  BreakpointGrid grid({0.0, 1.0, 2.0, 3.5});
  for (double xi : {1.0, 2.0}) {
    for (double h : {1e-3, 0.2}) {
      CHECK(mt_metric(dirac(xi), dirac(xi + h), grid) == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(mt_metric(dirac(xi), dirac(xi - h), grid) == doctest::Approx(h).epsilon(1e-12));
    }
  }
}

TEST_CASE("mt metric when the left perturbation leaves the interval") {
  // Beyond min(2, x_1 - x_0) the interval decomposition takes over; checked
  // against the vertex oracle rather than a closed form.
  const BreakpointGrid& grid = grid012();
  for (double eps : {0.8, 1.5, 3.0}) {
    double fast = mt_metric(dirac(1.0), dirac(1.0 - eps), grid);
    double slow = metric_oracle(MetricKind::MeasureTransmission, dirac(1.0), dirac(1.0 - eps), &grid);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-9));
  }
  CHECK(mt_metric(dirac(1.0), dirac(0.2), grid) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(mt_metric(dirac(1.0), dirac(-0.5), grid) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("oracle closed values and size cap") {
  const BreakpointGrid& grid = grid012();
  CHECK(metric_oracle(MetricKind::Flat, dirac(0.0), dirac(0.25)) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(metric_oracle(MetricKind::MeasureTransmission, dirac(1.0), dirac(1.25), &grid) ==
        doctest::Approx(2.0).epsilon(1e-12));
  DiscreteMeasure m = DiscreteMeasure::make({{0.1, 0.3}, {0.7, 0.7}});
  CHECK(metric_oracle(MetricKind::NormDistance, m, m) == 0.0);

  std::vector<Atom> many;
  for (int i = 0; i < 7; ++i) many.push_back({0.1 * i, 1.0});
  try {
    metric_oracle(MetricKind::Flat, DiscreteMeasure::make(many), DiscreteMeasure{});
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
}

TEST_CASE("fast paths agree with the vertex oracle on random instances") {
  std::mt19937_64 rng(101);
  const BreakpointGrid& grid = grid012();
  for (int trial = 0; trial < 300; ++trial) {
    DiscreteMeasure a = random_measure(rng, 3, -0.5, 2.5);
    DiscreteMeasure b = random_measure(rng, 2, -0.5, 2.5);
    if (difference(a, b).positions.size() > 5) continue;
    CHECK(std::fabs(flat_metric(a, b) - metric_oracle(MetricKind::Flat, a, b)) <= 1e-9);
    CHECK(std::fabs(mt_metric(a, b, grid) -
                    metric_oracle(MetricKind::MeasureTransmission, a, b, &grid)) <= 1e-9);
    CHECK(std::fabs(norm_distance(a, b) - metric_oracle(MetricKind::NormDistance, a, b)) <= 1e-9);
  }
}

TEST_CASE("oracle agreement survives adversarial supports") {
  // Clustered positions just above the merge tolerance, atoms hugging a
  // breakpoint, and far-out atoms with huge gaps.
  std::mt19937_64 rng(31337);
  const BreakpointGrid& grid = grid012();
  auto gen = [&](int n) {
    std::vector<Atom> atoms;
    for (int i = 0; i < n; ++i) {
      double pos;
      switch (rng() % 5) {
        case 0: pos = 1.0 + uniform(rng, -1e-13, 1e-13); break;
        case 1: pos = uniform(rng, 0.999, 1.001); break;
        case 2: pos = uniform(rng, -50.0, 50.0); break;
        case 3: pos = 0.5 + static_cast<double>(rng() % 4) * 1e-10; break;
        default: pos = uniform(rng, -0.5, 2.5); break;
      }
      atoms.push_back({pos, rng() % 6 == 0 ? 0.0 : uniform(rng, 0.0, 3.0)});
    }
    return DiscreteMeasure::make(std::move(atoms));
  };
  for (int trial = 0; trial < 400; ++trial) {
    DiscreteMeasure a = gen(1 + static_cast<int>(rng() % 3));
    DiscreteMeasure b = gen(1 + static_cast<int>(rng() % 3));
    if (difference(a, b).positions.size() > 6) continue;
    CHECK(std::fabs(flat_metric(a, b) - metric_oracle(MetricKind::Flat, a, b)) <= 1e-9);
    CHECK(std::fabs(mt_metric(a, b, grid) -
                    metric_oracle(MetricKind::MeasureTransmission, a, b, &grid)) <= 1e-9);
  }
}

TEST_CASE("wasserstein agrees with the transport-plan oracle") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    DiscreteMeasure a = normalized(random_measure(rng, 3, -1.0, 2.0));
    DiscreteMeasure b = normalized(random_measure(rng, 3, -1.0, 2.0));
    CHECK(std::fabs(wasserstein1(a, b) - metric_oracle(MetricKind::Wasserstein1, a, b)) <= 1e-9);
  }
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(303);
  const BreakpointGrid& grid = grid012();
  auto eval = [&](MetricKind kind, const DiscreteMeasure& a, const DiscreteMeasure& b) {
    return metric(kind, a, b, &grid);
  };
  for (MetricKind kind : {MetricKind::NormDistance, MetricKind::Wasserstein1, MetricKind::Flat,
                          MetricKind::MeasureTransmission}) {
    for (int trial = 0; trial < 100; ++trial) {
      DiscreteMeasure a = random_measure(rng, 8, -0.5, 2.5);
      DiscreteMeasure b = random_measure(rng, 8, -0.5, 2.5);
      DiscreteMeasure c = random_measure(rng, 8, -0.5, 2.5);
      if (kind == MetricKind::Wasserstein1) {
        a = normalized(a);
        b = normalized(b);
        c = normalized(c);
      }
      double ab = eval(kind, a, b);
      double ba = eval(kind, b, a);
      double ac = eval(kind, a, c);
      double bc = eval(kind, b, c);
      CHECK(ab >= 0.0);
      CHECK(std::fabs(ab - ba) <= 1e-12);
      CHECK(ac <= ab + bc + 1e-9);
      CHECK(eval(kind, a, a) == 0.0);
    }
  }
}

TEST_CASE("positivity for distinct measures") {
  std::mt19937_64 rng(404);
  const BreakpointGrid& grid = grid012();
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteMeasure a = normalized(random_measure(rng, 4, 0.1, 1.9));
    // Guarantee a genuine difference: shift one atom by at least 1e-3.
    std::vector<Atom> atoms = a.atoms();
    atoms[0].pos += uniform(rng, 1e-3, 5e-2);
    DiscreteMeasure b = DiscreteMeasure::make(std::move(atoms));
    CHECK(norm_distance(a, b) > 0.0);
    CHECK(flat_metric(a, b) > 0.0);
    CHECK(mt_metric(a, b, grid) > 0.0);
    CHECK(wasserstein1(a, b) > 0.0);
  }
}

TEST_CASE("ordering chain from test-class inclusions") {
  std::mt19937_64 rng(505);
  const BreakpointGrid& grid = grid012();
  for (int trial = 0; trial < 100; ++trial) {
    DiscreteMeasure a = random_measure(rng, 8, -0.5, 2.5);
    DiscreteMeasure b = random_measure(rng, 8, -0.5, 2.5);
    double flat = flat_metric(a, b);
    double mt = mt_metric(a, b, grid);
    double norm = norm_distance(a, b);
    CHECK(flat <= mt + 1e-9);
    CHECK(mt <= norm + 1e-9);
    DiscreteMeasure an = normalized(a);
    DiscreteMeasure bn = normalized(b);
    CHECK(flat_metric(an, bn) <= wasserstein1(an, bn) + 1e-9);
  }
}

TEST_CASE("metric dispatcher needs a grid only for mt") {
  CHECK(metric(MetricKind::Flat, dirac(0.0), dirac(1.0)) == 1.0);
  CHECK_THROWS_AS(metric(MetricKind::MeasureTransmission, dirac(0.0), dirac(1.0)), Error);
}
