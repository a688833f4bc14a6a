#include "mtlab/model.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace mtlab {

using ordered_json = nlohmann::ordered_json;

ModelCoefficients::ModelCoefficients(BreakpointGrid g) : grid(std::move(g)) {
  c.assign(grid.segment_count() + 1, PiecewiseLinearFn::constant(0.0));
}

bool ModelCoefficients::p_is_zero() const {
  if (p1.is_zero()) return true;
  if (p2.empty()) return true;
  return std::all_of(p2.begin(), p2.end(), [](const PiecewiseLinearFn& f) { return f.is_zero(); });
}

double ModelCoefficients::p2_at(double x) const {
  if (p2.empty()) return 0.0;
  const auto& pts = grid.points();
  if (x < pts.front() || x > pts.back()) return 0.0;
  // A grid point belongs to the interval it closes on the right; x_0 itself
  // closes no interval inside [x_0, x_N] and evaluates to 0.
  std::size_t idx = grid.interval_index(x);
  if (idx == 0 || idx > grid.segment_count()) return 0.0;
  return p2[idx - 1](x);
}

double ModelCoefficients::sup_c() const {
  double s = 0.0;
  for (const auto& ci : c) s = std::max(s, std::max(std::fabs(ci.sup()), std::fabs(ci.inf())));
  return s;
}

double ModelCoefficients::lip_c() const {
  double s = 0.0;
  for (const auto& ci : c) s = std::max(s, ci.lipschitz());
  return s;
}

double ModelCoefficients::min_g1_on(double tv_bound) const {
  double m = g1.inf_on(0.0, std::max(0.0, tv_bound));
  if (!(m > 0.0))
    fail(ErrorCode::NonPositiveSpeed, "speed table g1 is not positive on the reachable range");
  return m;
}

void ModelCoefficients::validate() const {
  if (!(g1.inf() > 0.0)) fail(ErrorCode::AssumptionViolated, "g1>0");
  if (c.size() != grid.segment_count() + 1)
    fail(ErrorCode::ConfigInvalid, "c needs one table per grid point");
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i].inf() < 0.0) fail(ErrorCode::AssumptionViolated, "c_i>=0");
  if (!c.back().is_zero()) fail(ErrorCode::AssumptionViolated, "c_N=0");
  if (!p2.empty() && p2.size() != grid.segment_count())
    fail(ErrorCode::ConfigInvalid, "p2 needs one table per grid interval");
}

const DiscreteMeasure& ModelFile::measure(const std::string& name) const {
  for (const auto& [n, m] : initial_measures)
    if (n == name) return m;
  fail(ErrorCode::ConfigInvalid, "initial_measures has no entry named '" + name + "'");
}

namespace {

PiecewiseLinearFn table_from_json(const ordered_json& j, const std::string& where) {
  if (j.is_number()) return PiecewiseLinearFn::constant(j.get<double>());
  if (!j.is_object() || !j.contains("knots") || !j.contains("values"))
    fail(ErrorCode::ConfigInvalid, where + ": expected a number or {knots, values}");
  std::vector<double> knots, values;
  for (const auto& v : j.at("knots")) knots.push_back(v.get<double>());
  for (const auto& v : j.at("values")) values.push_back(v.get<double>());
  try {
    return PiecewiseLinearFn(std::move(knots), std::move(values));
  } catch (const Error& e) {
    fail(ErrorCode::ConfigInvalid, where + ": " + e.what());
  }
}

ordered_json table_to_json(const PiecewiseLinearFn& f) {
  if (f.knots().size() == 1) return f.values().front();
  return ordered_json{{"knots", f.knots()}, {"values", f.values()}};
}

DiscreteMeasure measure_from(const ordered_json& j, const std::string& where) {
  if (!j.is_array()) fail(ErrorCode::ConfigInvalid, where + ": expected [[position, weight], ...]");
  std::vector<Atom> atoms;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      fail(ErrorCode::ConfigInvalid, where + ": expected [[position, weight], ...]");
    atoms.push_back({e[0].get<double>(), e[1].get<double>()});
  }
  return DiscreteMeasure::make(std::move(atoms));
}

}  // namespace

ModelFile load_model_file(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::exception& e) {
    fail(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("grid"))
    fail(ErrorCode::ConfigInvalid, "model file needs a top-level object with a 'grid' array");

  std::vector<double> pts;
  for (const auto& v : j.at("grid")) pts.push_back(v.get<double>());
  BreakpointGrid grid(std::move(pts));
  const std::size_t n_segments = grid.segment_count();

  ModelCoefficients model(std::move(grid));
  if (j.contains("g1")) model.g1 = table_from_json(j.at("g1"), "g1");
  if (j.contains("p1")) model.p1 = table_from_json(j.at("p1"), "p1");
  if (j.contains("p2")) {
    const auto& arr = j.at("p2");
    if (!arr.is_array() || arr.size() != n_segments)
      fail(ErrorCode::ConfigInvalid, "p2: expected one table per grid interval");
    model.p2.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      model.p2.push_back(table_from_json(arr[i], "p2[" + std::to_string(i) + "]"));
  }
  if (j.contains("c")) {
    const auto& arr = j.at("c");
    if (!arr.is_array() || arr.size() != n_segments + 1)
      fail(ErrorCode::ConfigInvalid, "c: expected one table per grid point");
    model.c.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
      model.c.push_back(table_from_json(arr[i], "c[" + std::to_string(i) + "]"));
  }
  model.validate();

  ModelFile file{std::move(model), {}, {}};
  if (j.contains("initial_measures")) {
    const auto& obj = j.at("initial_measures");
    if (!obj.is_object()) fail(ErrorCode::ConfigInvalid, "initial_measures: expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
      file.initial_measures.emplace_back(it.key(),
                                         measure_from(it.value(), "initial_measures." + it.key()));
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    file.solver.present = true;
    if (s.contains("dt")) file.solver.dt = s.at("dt").get<double>();
    if (s.contains("T")) file.solver.horizon = s.at("T").get<double>();
    if (s.contains("quad_particles_per_step"))
      file.solver.quad_particles_per_step = s.at("quad_particles_per_step").get<int>();
    if (s.contains("merge_tolerance"))
      file.solver.merge_tolerance = s.at("merge_tolerance").get<double>();
    if (s.contains("drop_tolerance"))
      file.solver.drop_tolerance = s.at("drop_tolerance").get<double>();
  }
  return file;
}

std::string model_file_to_json(const ModelFile& file) {
  ordered_json j;
  j["grid"] = file.model.grid.points();
  j["g1"] = table_to_json(file.model.g1);
  if (!file.model.p1.is_zero()) j["p1"] = table_to_json(file.model.p1);
  if (!file.model.p2.empty()) {
    ordered_json arr = ordered_json::array();
    for (const auto& f : file.model.p2) arr.push_back(table_to_json(f));
    j["p2"] = arr;
  }
  {
    ordered_json arr = ordered_json::array();
    for (const auto& f : file.model.c) arr.push_back(table_to_json(f));
    j["c"] = arr;
  }
  if (!file.initial_measures.empty()) {
    ordered_json obj = ordered_json::object();
    for (const auto& [name, m] : file.initial_measures) {
      ordered_json arr = ordered_json::array();
      for (const Atom& a : m.atoms()) arr.push_back({a.pos, a.weight});
      obj[name] = arr;
    }
    j["initial_measures"] = obj;
  }
  if (file.solver.present) {
    ordered_json s;
    s["dt"] = file.solver.dt;
    s["T"] = file.solver.horizon;
    s["quad_particles_per_step"] = file.solver.quad_particles_per_step;
    s["merge_tolerance"] = file.solver.merge_tolerance;
    s["drop_tolerance"] = file.solver.drop_tolerance;
    j["solver"] = s;
  }
  return j.dump(2);
}

}  // namespace mtlab
