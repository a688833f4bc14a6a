// Exercises the installed CLI end to end: exit codes, output bytes and
// determinism. argv[1] is the path to the mtlab binary.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <cmath>
#include <string>

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("%s  %s\n", ok ? "ok " : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& command) {
  std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (!pipe) return {-1, "popen failed"};
  std::string output;
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), got);
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, output};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_checks <path-to-mtlab>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const std::string dir = "cli_checks_tmp";
  if (std::system(("rm -rf " + dir + " && mkdir -p " + dir).c_str()) != 0) {
    std::fprintf(stderr, "cannot prepare %s\n", dir.c_str());
    return 2;
  }

  {
    RunResult r = run(cli + " metric --kind mt --grid '[0,1,2]' --m1 '[[1.0,1.0]]'"
                            " --m2 '[[1.25,1.0]]'");
    expect(r.exit_code == 0 && r.output == "2\n", "metric mt prints the exact value");
  }
  {
    RunResult r = run(cli + " metric --kind flat --m1 '[[0,1]]' --m2 '[[0.333333333333333,1]]'");
    expect(r.exit_code == 0 && r.output == "0.333333333333333\n",
           "metric prints 15 significant digits");
  }
  {
    RunResult r = run(cli + " metric --kind w1 --m1 '[[0,1]]' --m2 '[[0,2]]'");
    expect(r.exit_code == 1 && r.output.find("unequal-mass") != std::string::npos,
           "unequal masses exit 1 with the status name");
  }

  const std::string model = dir + "/model.json";
  write(model, R"({"grid":[0,1,2],"g1":1.0,"c":[0.0,0.8,0.0],
    "initial_measures":{"mu":[[1.0,1.0]],"mu_eps":[[0.85,1.0]]},
    "solver":{"dt":0.001,"T":0.4}})");

  {
    RunResult first = run(cli + " simulate --model " + model + " --out " + dir + "/a.csv");
    RunResult second = run(cli + " simulate --model " + model + " --out " + dir + "/b.csv");
    expect(first.exit_code == 0 && second.exit_code == 0, "simulate runs");
    std::string a = slurp(dir + "/a.csv");
    expect(!a.empty() && a == slurp(dir + "/b.csv"), "simulate output is byte-identical");
    expect(a.rfind("t,total_mass,v,atoms_count\n", 0) == 0, "simulate CSV header");
  }
  {
    RunResult r = run(cli + " simulate --model " + model + " --out " + dir +
                      "/snap.csv --snapshot-every 200");
    expect(r.exit_code == 0 && !slurp(dir + "/snap.csv.snap200.json").empty(),
           "snapshot sidecar files are written");
  }

  const std::string bad_model = dir + "/bad.json";
  write(bad_model, R"({"grid":[0,1,2],"c":[0.0,0.0,0.5],"solver":{"dt":0.01,"T":0.1}})");
  {
    RunResult r = run(cli + " simulate --model " + bad_model + " --out " + dir + "/x.csv");
    expect(r.exit_code == 1 && r.output.find("c_N=0") != std::string::npos,
           "violated standing assumption exits 1 and names c_N=0");
  }

  const std::string pairs = dir + "/pairs.json";
  write(pairs, R"([{"name":"named","m1":"mu","m2":"mu_eps"},
                   {"name":"inline","m1":[[0.5,1.0]],"m2":[[0.52,1.0]]}])");
  {
    RunResult first = run(cli + " stability --model " + model + " --pairs " + pairs + " --out " +
                          dir + "/s1.csv --workers 2");
    RunResult second = run(cli + " stability --model " + model + " --pairs " + pairs + " --out " +
                           dir + "/s2.csv --workers 1");
    expect(first.exit_code == 0 && second.exit_code == 0, "stability runs without violations");
    std::string csv = slurp(dir + "/s1.csv");
    expect(csv == slurp(dir + "/s2.csv"), "stability output independent of worker count");
    expect(csv.rfind("t,rho_mt,rho_flat,bound_local,bound_global,margin,violated\n", 0) == 0,
           "stability CSV header");
  }
  {
    RunResult r = run(cli + " constants --model " + model);
    expect(r.exit_code == 0 && r.output.find("\"kappa\"") != std::string::npos &&
               r.output.find("\"t_max\": 1.0") != std::string::npos,
           "constants prints the JSON bundle");
  }
  {
    RunResult r = run(cli + " examples --which 1.1 --out " + dir + "/ex.csv");
    std::string csv = slurp(dir + "/ex.csv");
    expect(r.exit_code == 0 &&
               csv.rfind("t,rho_mt_analytic,rho_mt_simulated,bound\n", 0) == 0,
           "examples 1.1 emits the expected CSV");
  }
  {
    // Drift configuration: the flat column of the stability CSV must track
    // t + eps while the MT column stays at 2.
    const std::string drift_model = dir + "/drift.json";
    write(drift_model, R"({"grid":[0,1,2],"g1":1.0,"c":[0.0,0.0,0.0],
      "initial_measures":{"mu":[[1.0,1.0]],"mu_eps":[[1.1,1.0]]},
      "solver":{"dt":0.01,"T":0.5}})");
    const std::string drift_pairs = dir + "/drift_pairs.json";
    write(drift_pairs, R"([{"name":"drift","m1":"mu","m2":"mu_eps"}])");
    RunResult r = run(cli + " stability --model " + drift_model + " --pairs " + drift_pairs +
                      " --out " + dir + "/drift.csv --stride 10");
    std::istringstream csv(slurp(dir + "/drift.csv"));
    std::string line;
    std::getline(csv, line);  // header
    bool tracks = r.exit_code == 0;
    while (std::getline(csv, line)) {
      double t = 0.0, rho_mt = 0.0, rho_flat = 0.0;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &rho_mt, &rho_flat) != 3) tracks = false;
      if (std::fabs(rho_flat - (t + 0.1)) > 1e-9 || std::fabs(rho_mt - 2.0) > 1e-9) tracks = false;
    }
    expect(tracks, "stability flat column tracks t + eps on the drift pair");
  }
  {
    RunResult r = run(cli + " simulate --model " + model + " --out " + dir +
                      "/empty.csv --measure '[]'");
    std::string csv = slurp(dir + "/empty.csv");
    expect(r.exit_code == 0 && csv.find("\n0,0,0,0\n") != std::string::npos,
           "empty initial measure yields an all-zero trajectory");
  }
  {
    RunResult r = run(cli + " reproduce-all");
    expect(r.exit_code == 0 && r.output.find("FAIL") == std::string::npos,
           "full reproduce-all passes");
  }
  {
    RunResult r = run(cli + " reproduce-all --list");
    expect(r.exit_code == 0 && r.output.find("table2-values") != std::string::npos &&
               r.output.find("global-bound-sweep") != std::string::npos,
           "reproduce-all --list names the checks");
  }
  {
    RunResult r = run(cli + " reproduce-all --filter table2");
    expect(r.exit_code == 0 && r.output.find("PASS") != std::string::npos,
           "reproduce-all passes on the value checks");
  }
  {
    RunResult r = run(cli + " reproduce-all --filter table2 --inject-metric-skew 0.5");
    expect(r.exit_code == 2 && r.output.find("FAIL") != std::string::npos,
           "injected metric bug makes reproduce-all exit 2");
  }
  {
    RunResult r = run(cli + " metric --kind mt --m1 '[[0,1]]' --m2 '[[1,1]]'");
    expect(r.exit_code == 1, "mt without a grid exits 1");
  }

  std::printf("%s\n", failures == 0 ? "all cli checks passed" : "cli checks FAILED");
  return failures == 0 ? 0 : 1;
}
