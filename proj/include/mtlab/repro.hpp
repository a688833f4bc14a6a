#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mtlab::repro {

struct Options {
  std::uint64_t seed = 20260809ULL;
  int workers = 0;           // 0 = hardware concurrency
  double metric_skew = 0.0;  // negative-control hook: added to metric values
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<std::string> check_names();

/// Runs the named check (see check_names). Unknown name throws InvalidArgument.
CheckResult run_check(const std::string& name, const Options& opt);

/// Runs every check in order; sweeps parallelize internally over pairs.
std::vector<CheckResult> run_all(const Options& opt);

// Individual checks, also driven directly by the acceptance suite.
CheckResult check_table2(const Options& opt);
CheckResult check_perturbation_values(const Options& opt);   // delta_0 vs delta_eps values
CheckResult check_drift_series(const Options& opt);          // flat grows like t + eps, MT stays 2
CheckResult check_outflow_pair(const Options& opt);          // decaying atom vs delayed atom
CheckResult check_speed_coupled_pair(const Options& opt);    // two-atom speed-coupled ratio
CheckResult check_global_sweep(const Options& opt);
CheckResult check_nonlinear_sweep(const Options& opt);

}  // namespace mtlab::repro
