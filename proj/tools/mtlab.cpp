// Command-line front end over the mtlab C API. Subcommands: metric, simulate,
// examples, stability, constants, reproduce-all. Structured inputs are JSON
// (inline or a file path); time series land in CSV. Exit codes: 0 success,
// 1 configuration error, 2 bound violation / failed check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtlab/mtlab.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitViolation = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

void check(mtlab_status status, const std::string& context) {
  if (status == MTLAB_OK) return;
  die(kExitConfig,
      context + ": " + mtlab_status_name(status) + " (" + mtlab_last_error() + ")");
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { reset(); }
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      reset();
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  void reset() {
    if (ptr) Free(ptr);
    ptr = nullptr;
  }
  T** out() { return &ptr; }
  T* get() const { return ptr; }
};

using MeasureHandle = Handle<mtlab_measure, mtlab_measure_free>;
using GridHandle = Handle<mtlab_grid, mtlab_grid_free>;
using ModelHandle = Handle<mtlab_model, mtlab_model_free>;
using TrajectoryHandle = Handle<mtlab_trajectory, mtlab_trajectory_free>;

std::string owned_string(char* s) {
  std::string out = s ? s : "";
  mtlab_string_free(s);
  return out;
}

// JSON arguments may be given inline or as a path to a file.
std::string load_json_argument(const std::string& arg, const std::string& what) {
  if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) return arg;
  std::ifstream in(arg);
  if (!in) die(kExitConfig, what + ": cannot open file '" + arg + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_double(double v, const char* pattern = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, v);
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitConfig, "cannot write '" + path + "'");
  out << content;
}

int resolve_workers(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MTLAB_WORKERS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

MeasureHandle measure_from_arg(const std::string& arg, const std::string& what) {
  MeasureHandle m;
  check(mtlab_measure_from_json(load_json_argument(arg, what).c_str(), m.out()), what);
  return m;
}

MeasureHandle measure_from_model(const mtlab_model* model, const std::string& name_or_json,
                                 const std::string& what) {
  if (!name_or_json.empty() && name_or_json.front() == '[')
    return measure_from_arg(name_or_json, what);
  MeasureHandle m;
  check(mtlab_model_measure(model, name_or_json.c_str(), m.out()), what);
  return m;
}

mtlab_metric_kind parse_kind(const std::string& name) {
  if (name == "norm") return MTLAB_METRIC_NORM;
  if (name == "w1") return MTLAB_METRIC_W1;
  if (name == "flat") return MTLAB_METRIC_FLAT;
  if (name == "mt") return MTLAB_METRIC_MT;
  die(kExitConfig, "unknown metric kind '" + name + "' (norm|w1|flat|mt)");
}

double metric_or_die(mtlab_metric_kind kind, const mtlab_measure* a, const mtlab_measure* b,
                     const mtlab_grid* grid) {
  double value = 0.0;
  check(mtlab_metric(kind, a, b, grid, &value), "metric");
  return value;
}

/* ------------------------------ metric ---------------------------------- */

int cmd_metric(const std::string& kind_name, const std::string& grid_arg, const std::string& m1_arg,
               const std::string& m2_arg) {
  mtlab_metric_kind kind = parse_kind(kind_name);
  GridHandle grid;
  if (!grid_arg.empty())
    check(mtlab_grid_from_json(load_json_argument(grid_arg, "--grid").c_str(), grid.out()),
          "--grid");
  if (kind == MTLAB_METRIC_MT && !grid.get()) die(kExitConfig, "metric mt needs --grid");
  MeasureHandle m1 = measure_from_arg(m1_arg, "--m1");
  MeasureHandle m2 = measure_from_arg(m2_arg, "--m2");
  double value = metric_or_die(kind, m1.get(), m2.get(), grid.get());
  std::printf("%s\n", format_double(value, "%.15g").c_str());
  return kExitOk;
}

/* ------------------------------ simulate -------------------------------- */

int cmd_simulate(const std::string& model_arg, const std::string& out_path,
                 const std::string& measure_name, double dt_flag, double horizon_flag,
                 int snapshot_every) {
  ModelHandle model;
  check(mtlab_model_from_json(load_json_argument(model_arg, "--model").c_str(), model.out()),
        "--model");

  double dt = 0.0, horizon = 0.0, merge = 0.0;
  int quad = 1;
  mtlab_model_solver(model.get(), &dt, &horizon, &quad, &merge);
  if (dt_flag > 0.0) dt = dt_flag;
  if (horizon_flag > 0.0) horizon = horizon_flag;
  if (!(dt > 0.0) || !(horizon > 0.0))
    die(kExitConfig, "simulate needs dt and T (solver block or --dt/--horizon)");

  std::string name = measure_name;
  if (name.empty()) {
    if (mtlab_model_measure_count(model.get()) == 0)
      die(kExitConfig, "model has no initial_measures; pass --measure <json>");
    char* first = nullptr;
    check(mtlab_model_measure_name(model.get(), 0, &first), "initial measure");
    name = owned_string(first);
  }
  MeasureHandle m0 = measure_from_model(model.get(), name, "--measure");

  TrajectoryHandle traj;
  check(mtlab_simulate(model.get(), m0.get(), horizon, dt, quad, merge, traj.out()), "simulate");

  std::ostringstream csv;
  csv << "t,total_mass,v,atoms_count\n";
  size_t steps = mtlab_trajectory_steps(traj.get());
  for (size_t k = 0; k < steps; ++k) {
    csv << format_double(mtlab_trajectory_time(traj.get(), k)) << ','
        << format_double(mtlab_trajectory_total_mass(traj.get(), k)) << ','
        << format_double(mtlab_trajectory_v(traj.get(), k)) << ','
        << mtlab_trajectory_atom_count(traj.get(), k) << '\n';
  }
  write_file(out_path, csv.str());

  if (snapshot_every > 0) {
    for (size_t k = 0; k < steps; k += static_cast<size_t>(snapshot_every)) {
      MeasureHandle snap;
      check(mtlab_trajectory_snapshot(traj.get(), k, snap.out()), "snapshot");
      char* json = nullptr;
      check(mtlab_measure_to_json(snap.get(), &json), "snapshot json");
      write_file(out_path + ".snap" + std::to_string(k) + ".json", owned_string(json) + "\n");
    }
  }
  return kExitOk;
}

/* ------------------------------ examples -------------------------------- */

struct ExampleSetup {
  mtlab_example_id id;
  mtlab_example_params params;
  std::string grid_json;
  std::string model_json;
  std::string m1_json;
  std::string m2_json;
  double horizon;
  double dt;
  int rows;
};

ExampleSetup example_setup(const std::string& which) {
  if (which == "1.1") {
    return {MTLAB_EXAMPLE_DRIFT,
            {0.1, 0.0, 0.0, 0.0, 0},
            "[0,1,2]",
            R"({"grid":[0,1,2],"g1":1.0,"c":[0.0,0.0,0.0]})",
            "[[1.0,1.0]]",
            "[[1.1,1.0]]",
            0.5,
            0.5 / 250.0,
            11};
  }
  if (which == "4.5") {
    return {MTLAB_EXAMPLE_OUTFLOW,
            {0.2, 1.0, 0.0, 0.0, 2000},
            "[0,1,2]",
            R"({"grid":[0,1,2],"g1":1.0,"c":[0.0,1.0,0.0]})",
            "[[1.0,1.0]]",
            "[[0.8,1.0]]",
            0.2,
            0.2 / 400.0,
            11};
  }
  if (which == "4.6") {
    return {MTLAB_EXAMPLE_SPEED_COUPLED,
            {0.05, 0.0, 0.5, 1.3, 0},
            "[0,1,2.6]",
            R"({"grid":[0,1,2.6],"g1":{"knots":[0.0,0.999999,1.0],"values":[0.5,0.5,1.0]},)"
            R"("c":[0.0,0.0,0.0]})",
            "[[1.3,1.0],[2.6,1.0]]",
            "[[1.3,1.0],[2.55,1.0]]",
            0.1,
            0.1 / 250.0,
            11};
  }
  die(kExitConfig, "unknown example '" + which + "' (1.1|4.5|4.6)");
}

int cmd_examples(const std::string& which, const std::string& out_path) {
  ExampleSetup setup = example_setup(which);

  GridHandle grid;
  check(mtlab_grid_from_json(setup.grid_json.c_str(), grid.out()), "grid");
  ModelHandle model;
  check(mtlab_model_from_json(setup.model_json.c_str(), model.out()), "model");
  MeasureHandle m1 = measure_from_arg(setup.m1_json, "m1");
  MeasureHandle m2 = measure_from_arg(setup.m2_json, "m2");

  TrajectoryHandle t1, t2;
  check(mtlab_simulate(model.get(), m1.get(), setup.horizon, setup.dt, 1, 0.0, t1.out()), "sim");
  check(mtlab_simulate(model.get(), m2.get(), setup.horizon, setup.dt, 1, 0.0, t2.out()), "sim");
  size_t steps = mtlab_trajectory_steps(t1.get());

  double rho0 = 0.0;
  {
    MeasureHandle a0, b0;
    check(mtlab_example_pair(setup.id, 0.0, &setup.params, grid.get(), a0.out(), b0.out()), "pair");
    rho0 = metric_or_die(MTLAB_METRIC_MT, a0.get(), b0.get(), grid.get());
  }

  std::ostringstream csv;
  csv << "t,rho_mt_analytic,rho_mt_simulated,bound\n";
  for (int row = 0; row < setup.rows; ++row) {
    double t = setup.horizon * row / (setup.rows - 1);
    MeasureHandle a, b;
    check(mtlab_example_pair(setup.id, t, &setup.params, grid.get(), a.out(), b.out()), "pair");
    double rho_analytic = metric_or_die(MTLAB_METRIC_MT, a.get(), b.get(), grid.get());

    size_t k = std::min(steps - 1, static_cast<size_t>(std::llround(t / setup.dt)));
    MeasureHandle s1, s2;
    check(mtlab_trajectory_snapshot(t1.get(), k, s1.out()), "snapshot");
    check(mtlab_trajectory_snapshot(t2.get(), k, s2.out()), "snapshot");
    double rho_sim = metric_or_die(MTLAB_METRIC_MT, s1.get(), s2.get(), grid.get());

    double bound = 0.0;
    std::string bound_text;
    if (t <= 0.0) {
      bound_text = format_double(rho0);
    } else if (mtlab_local_c1(model.get(), m1.get(), m2.get(), t, &bound) == MTLAB_OK) {
      bound_text = format_double(bound * rho0);
    } else {
      bound_text = "inf";
    }
    csv << format_double(t) << ',' << format_double(rho_analytic) << ','
        << format_double(rho_sim) << ',' << bound_text << '\n';
  }
  write_file(out_path, csv.str());
  return kExitOk;
}

/* ------------------------------ stability -------------------------------- */

struct PairSpec {
  std::string name;
  std::string m1;
  std::string m2;
};

std::vector<PairSpec> parse_pairs(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    die(kExitConfig, std::string("--pairs: ") + e.what());
  }
  if (j.is_object() && j.contains("pairs")) j = j.at("pairs");
  if (!j.is_array()) die(kExitConfig, "--pairs: expected an array of {name, m1, m2}");
  std::vector<PairSpec> out;
  for (const auto& entry : j) {
    PairSpec spec;
    spec.name = entry.value("name", "pair" + std::to_string(out.size()));
    auto field = [&](const char* key) -> std::string {
      if (!entry.contains(key)) die(kExitConfig, std::string("--pairs: entry missing ") + key);
      const auto& v = entry.at(key);
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    spec.m1 = field("m1");
    spec.m2 = field("m2");
    out.push_back(std::move(spec));
  }
  return out;
}

int cmd_stability(const std::string& model_arg, const std::string& pairs_arg,
                  const std::string& out_path, double dt_flag, double horizon_flag, int workers_flag,
                  int stride_flag) {
  ModelHandle model;
  check(mtlab_model_from_json(load_json_argument(model_arg, "--model").c_str(), model.out()),
        "--model");
  std::vector<PairSpec> pairs = parse_pairs(load_json_argument(pairs_arg, "--pairs"));
  if (pairs.empty()) die(kExitConfig, "--pairs: no entries");

  double dt = 0.0, horizon = 0.0, merge = 0.0;
  int quad = 1;
  mtlab_model_solver(model.get(), &dt, &horizon, &quad, &merge);
  if (dt_flag > 0.0) dt = dt_flag;
  if (horizon_flag > 0.0) horizon = horizon_flag;
  if (!(dt > 0.0) || !(horizon > 0.0))
    die(kExitConfig, "stability needs dt and T (solver block or --dt/--horizon)");

  const int workers = resolve_workers(workers_flag);
  std::vector<std::string> blocks(pairs.size());
  std::vector<int> had_violation(pairs.size(), 0);
  std::atomic<size_t> cursor{0};
  std::mutex error_mutex;
  std::unique_ptr<CliError> first_error;

  auto worker = [&] {
    while (true) {
      size_t i = cursor.fetch_add(1);
      if (i >= pairs.size()) return;
      try {
        MeasureHandle m1 = measure_from_model(model.get(), pairs[i].m1, "pairs." + pairs[i].name);
        MeasureHandle m2 = measure_from_model(model.get(), pairs[i].m2, "pairs." + pairs[i].name);
        TrajectoryHandle t1, t2;
        check(mtlab_simulate(model.get(), m1.get(), horizon, dt, quad, merge, t1.out()), "simulate");
        check(mtlab_simulate(model.get(), m2.get(), horizon, dt, quad, merge, t2.out()), "simulate");

        GridHandle grid;
        check(mtlab_model_grid(model.get(), grid.out()), "grid");
        mtlab_constants constants{};
        check(mtlab_stability_constants(model.get(), m1.get(), m2.get(), &constants), "constants");

        MeasureHandle s1_0, s2_0;
        check(mtlab_trajectory_snapshot(t1.get(), 0, s1_0.out()), "snapshot");
        check(mtlab_trajectory_snapshot(t2.get(), 0, s2_0.out()), "snapshot");
        double rho0 = metric_or_die(MTLAB_METRIC_MT, s1_0.get(), s2_0.get(), grid.get());

        double tv1 = mtlab_measure_total_variation(m1.get());
        double tv2 = mtlab_measure_total_variation(m2.get());
        double allowance = 10.0 * (tv1 + tv2 + 1.0) * std::max(1.0, constants.sup_g1) * dt;

        size_t steps = mtlab_trajectory_steps(t1.get());
        size_t stride = stride_flag > 0 ? static_cast<size_t>(stride_flag)
                                        : std::max<size_t>(1, steps / 200);
        std::ostringstream block;
        for (size_t k = 0; k < steps; k += stride) {
          double t = mtlab_trajectory_time(t1.get(), k);
          MeasureHandle s1, s2;
          check(mtlab_trajectory_snapshot(t1.get(), k, s1.out()), "snapshot");
          check(mtlab_trajectory_snapshot(t2.get(), k, s2.out()), "snapshot");
          double rho_mt = metric_or_die(MTLAB_METRIC_MT, s1.get(), s2.get(), grid.get());
          double rho_flat = metric_or_die(MTLAB_METRIC_FLAT, s1.get(), s2.get(), nullptr);

          std::string bound_local = "inf";
          double c1 = 0.0;
          if (t > 0.0 && t < constants.t_max &&
              mtlab_local_c1(model.get(), m1.get(), m2.get(), t, &c1) == MTLAB_OK)
            bound_local = format_double(c1 * rho0);
          double exponent = constants.alpha * std::ceil(t / constants.beta);
          double factor = t <= 0.0 ? 1.0 : (exponent > 700.0 ? INFINITY : std::exp(exponent));
          double bound_global = factor * rho0;
          double margin = bound_global + allowance - rho_mt;
          int violated = margin < 0.0 ? 1 : 0;
          if (violated) had_violation[i] = 1;
          block << format_double(t) << ',' << format_double(rho_mt) << ','
                << format_double(rho_flat) << ',' << bound_local << ','
                << format_double(bound_global) << ',' << format_double(margin) << ',' << violated
                << '\n';
        }
        blocks[i] = block.str();
      } catch (const CliError& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::make_unique<CliError>(e);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  for (int w = 0; w < std::max(1, workers); ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) throw *first_error;

  std::ostringstream csv;
  csv << "t,rho_mt,rho_flat,bound_local,bound_global,margin,violated\n";
  for (const std::string& b : blocks) csv << b;
  write_file(out_path, csv.str());

  bool any = std::any_of(had_violation.begin(), had_violation.end(), [](int v) { return v != 0; });
  return any ? kExitViolation : kExitOk;
}

/* ------------------------------ constants -------------------------------- */

int cmd_constants(const std::string& model_arg, const std::string& m1_arg,
                  const std::string& m2_arg) {
  ModelHandle model;
  check(mtlab_model_from_json(load_json_argument(model_arg, "--model").c_str(), model.out()),
        "--model");
  auto pick = [&](const std::string& arg, size_t index, const char* what) {
    if (!arg.empty()) return measure_from_model(model.get(), arg, what);
    if (mtlab_model_measure_count(model.get()) <= index)
      die(kExitConfig, std::string(what) + ": model defines too few initial_measures");
    char* name = nullptr;
    check(mtlab_model_measure_name(model.get(), index, &name), what);
    return measure_from_model(model.get(), owned_string(name), what);
  };
  MeasureHandle m1 = pick(m1_arg, 0, "--m1");
  MeasureHandle m2 = pick(m2_arg, 1, "--m2");

  mtlab_constants k{};
  check(mtlab_stability_constants(model.get(), m1.get(), m2.get(), &k), "constants");

  nlohmann::ordered_json j;
  j["t_max"] = k.t_max;
  j["t_int"] = k.t_int;
  j["t_intmin"] = k.t_intmin;
  j["L"] = std::isfinite(k.mass_step) ? nlohmann::ordered_json(k.mass_step)
                                      : nlohmann::ordered_json("inf");
  j["it1"] = k.it1;
  j["it2"] = k.it2;
  j["kappa"] = k.kappa;
  j["alpha"] = k.alpha;
  j["beta"] = k.beta;
  j["fixed_step"] = k.fixed_step != 0;
  j["min_g1"] = k.min_g1;
  j["sup_g1"] = k.sup_g1;
  j["sup_c"] = k.sup_c;
  j["lip_g1"] = k.lip_g1;
  j["lip_c"] = k.lip_c;
  std::printf("%s\n", j.dump(2).c_str());
  return kExitOk;
}

/* ------------------------------ reproduce-all ----------------------------- */

int cmd_reproduce_all(bool list_only, std::uint64_t seed, int workers_flag,
                      const std::string& filter, double metric_skew) {
  std::vector<std::string> names;
  for (size_t i = 0; i < mtlab_repro_count(); ++i) {
    char* name = nullptr;
    check(mtlab_repro_name(i, &name), "repro");
    names.push_back(owned_string(name));
  }
  if (!filter.empty()) {
    std::vector<std::string> kept;
    for (const std::string& n : names)
      if (n.find(filter) != std::string::npos) kept.push_back(n);
    names = std::move(kept);
  }
  if (list_only) {
    for (const std::string& n : names) std::printf("%s\n", n.c_str());
    return kExitOk;
  }

  const int workers = resolve_workers(workers_flag);
  bool all_pass = true;
  for (const std::string& name : names) {
    int pass = 0;
    char* detail = nullptr;
    check(mtlab_repro_run(name.c_str(), seed, workers, metric_skew, &pass, &detail), name);
    std::printf("%-28s %s  %s\n", name.c_str(), pass ? "PASS" : "FAIL",
                owned_string(detail).c_str());
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  return all_pass ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"measure metrics and transport with transmission conditions"};
  app.require_subcommand(1);

  std::string kind, grid_arg, m1_arg, m2_arg, model_arg, out_path, measure_name, which, pairs_arg,
      filter;
  double dt = 0.0, horizon = 0.0, metric_skew = 0.0;
  int snapshot_every = 0, workers = 0, stride = 0;
  std::uint64_t seed = 20260809ULL;
  bool list_only = false;

  CLI::App* metric_cmd = app.add_subcommand("metric", "distance between two measures");
  metric_cmd->add_option("--kind", kind, "norm|w1|flat|mt")->required();
  metric_cmd->add_option("--grid", grid_arg, "breakpoint grid JSON (required for mt)");
  metric_cmd->add_option("--m1", m1_arg, "measure JSON or file")->required();
  metric_cmd->add_option("--m2", m2_arg, "measure JSON or file")->required();

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "run the particle scheme");
  simulate_cmd->add_option("--model", model_arg, "model JSON or file")->required();
  simulate_cmd->add_option("--out", out_path, "output CSV path")->required();
  simulate_cmd->add_option("--measure", measure_name, "initial measure name or inline JSON");
  simulate_cmd->add_option("--dt", dt, "time step override");
  simulate_cmd->add_option("--horizon", horizon, "horizon override");
  simulate_cmd->add_option("--snapshot-every", snapshot_every, "dump snapshot JSON every k steps");

  CLI::App* examples_cmd = app.add_subcommand("examples", "closed-form reference runs");
  examples_cmd->add_option("--which", which, "1.1|4.5|4.6")->required();
  examples_cmd->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* stability_cmd = app.add_subcommand("stability", "bound checks over measure pairs");
  stability_cmd->add_option("--model", model_arg, "model JSON or file")->required();
  stability_cmd->add_option("--pairs", pairs_arg, "pairs JSON or file")->required();
  stability_cmd->add_option("--out", out_path, "output CSV path")->required();
  stability_cmd->add_option("--dt", dt, "time step override");
  stability_cmd->add_option("--horizon", horizon, "horizon override");
  stability_cmd->add_option("--workers", workers, "worker threads (env MTLAB_WORKERS)");
  stability_cmd->add_option("--stride", stride, "emit every k-th step (default ~200 rows)");

  CLI::App* constants_cmd = app.add_subcommand("constants", "stability constants as JSON");
  constants_cmd->add_option("--model", model_arg, "model JSON or file")->required();
  constants_cmd->add_option("--m1", m1_arg, "measure name or inline JSON");
  constants_cmd->add_option("--m2", m2_arg, "measure name or inline JSON");

  CLI::App* repro_cmd = app.add_subcommand("reproduce-all", "run every built-in check");
  repro_cmd->add_flag("--list", list_only, "print check names without running");
  repro_cmd->add_option("--seed", seed, "sweep seed");
  repro_cmd->add_option("--workers", workers, "worker threads (env MTLAB_WORKERS)");
  repro_cmd->add_option("--filter", filter, "run only checks whose name contains this");
  repro_cmd->add_option("--inject-metric-skew", metric_skew, "test hook: skew metric values")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
    if (metric_cmd->parsed()) return cmd_metric(kind, grid_arg, m1_arg, m2_arg);
    if (simulate_cmd->parsed())
      return cmd_simulate(model_arg, out_path, measure_name, dt, horizon, snapshot_every);
    if (examples_cmd->parsed()) return cmd_examples(which, out_path);
    if (stability_cmd->parsed())
      return cmd_stability(model_arg, pairs_arg, out_path, dt, horizon, workers, stride);
    if (constants_cmd->parsed()) return cmd_constants(model_arg, m1_arg, m2_arg);
    if (repro_cmd->parsed())
      return cmd_reproduce_all(list_only, seed, workers, filter, metric_skew);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  }
}
