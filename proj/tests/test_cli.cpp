#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "dpc/instance_io.hpp"
#include "dpc/sweep.hpp"

using namespace dpc;
using nlohmann::json;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run(const std::string& args) {
  const std::string cmd = std::string(DPCBENCH_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult res;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe))
    res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WEXITSTATUS(status);
  return res;
}

std::string tmp_path(const std::string& name) {
  return std::string("/tmp/dpc_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("instance JSON round trip") {
  const auto inst = sample_rayleigh_instance(3, 2, 1.25, 42);
  const std::string path = tmp_path("roundtrip.json");
  save_instance(inst, path);
  const auto back = load_instance(path);
  CHECK(back.num_users == inst.num_users);
  CHECK(back.num_tx_antennas == inst.num_tx_antennas);
  CHECK(back.rate_targets == inst.rate_targets);
  for (int m = 0; m < 3; ++m) CHECK(back.channels[m] == inst.channels[m]);
}

TEST_CASE("malformed instance files are validation errors") {
  const std::string path = tmp_path("bad.json");
  std::ofstream(path) << "{\"num_users\": 2}";
  CHECK_THROWS_AS(load_instance(path), std::invalid_argument);
  CHECK_THROWS_AS(load_instance("/nonexistent/x.json"),
                  std::ios_base::failure);
}

TEST_CASE("derive_trial_seed is stable and injective-ish") {
  CHECK(derive_trial_seed(1, 0, 0) == derive_trial_seed(1, 0, 0));
  CHECK(derive_trial_seed(1, 0, 0) != derive_trial_seed(1, 0, 1));
  CHECK(derive_trial_seed(1, 0, 0) != derive_trial_seed(1, 1, 0));
  CHECK(derive_trial_seed(1, 0, 0) != derive_trial_seed(2, 0, 0));
}

TEST_CASE("solve: single-user relaxation matches the closed form") {
  // instance file with h=[1], target 1
  const std::string path = tmp_path("single.json");
  std::ofstream(path) << R"({"num_users":1,"num_tx_antennas":1,
      "rate_targets":[1.0],"channels":[[[1.0,0.0]]]})";
  auto res = run("solve --instance " + path + " --method relaxation");
  CHECK(res.exit_code == 0);
  const json j = json::parse(res.out);
  CHECK(j["relaxation"]["sum_power"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));

  auto both = run("solve --instance " + path + " --method exhaustive,relaxation");
  const json j2 = json::parse(both.out);
  CHECK(j2["exhaustive"]["sum_power"].get<double>() ==
        doctest::Approx(j2["relaxation"]["sum_power"].get<double>())
            .epsilon(1e-6));
}

TEST_CASE("solve: method ordering on a sampled instance") {
  auto res = run(
      "solve --sample 3,3,1.5,7 --method random,heuristic,exhaustive,relaxation");
  CHECK(res.exit_code == 0);
  const json j = json::parse(res.out);
  const double relax = j["relaxation"]["sum_power"].get<double>();
  const double exh = j["exhaustive"]["sum_power"].get<double>();
  const double heur = j["heuristic"]["sum_power"].get<double>();
  const double rnd = j["random"]["sum_power"].get<double>();
  CHECK(relax <= exh + 1e-6);
  CHECK(exh <= heur + 1e-9);
  CHECK(heur <= rnd + 1e-9);
}

TEST_CASE("certify subcommand") {
  auto res = run("certify --sample 1,1,1.0,3 --order 1");
  CHECK(res.exit_code == 0);
  CHECK(json::parse(res.out)["verdict"] == "Optimal");

  // orthogonal equal instance via file -> boundary verdict
  const std::string path = tmp_path("ortho.json");
  std::ofstream(path) << R"({"num_users":2,"num_tx_antennas":2,
      "rate_targets":[1.0,1.0],
      "channels":[[[1.0,0.0],[0.0,0.0]],[[0.0,0.0],[1.0,0.0]]]})";
  auto res2 = run("certify --instance " + path + " --order 2,1");
  CHECK(res2.exit_code == 0);
  CHECK(json::parse(res2.out)["verdict"] == "TimeSharingBoundary");

  auto bad = run("certify --instance " + path + " --order 1,1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("sweep: row counts, determinism, threading invariance") {
  const std::string config_path = tmp_path("sweep_config.json");
  std::ofstream(config_path) << R"({
    "num_users": 2, "num_tx_antennas": 2,
    "rate_grid": [0.5, 1.0, 1.5], "trials": 10, "master_seed": 9,
    "methods": ["random", "heuristic", "exhaustive", "relaxation"]})";

  const std::string out1 = tmp_path("sweep1.csv");
  const std::string out2 = tmp_path("sweep2.csv");
  auto r1 = run("sweep --config " + config_path + " --out " + out1);
  CHECK(r1.exit_code == 0);
  auto r2 = run("sweep --config " + config_path + " --out " + out2 +
                " --threads 4");
  CHECK(r2.exit_code == 0);

  const std::string csv1 = slurp(out1);
  const std::string csv2 = slurp(out2);
  CHECK(csv1 == csv2);  // byte-identical, threading included

  long data_rows = 0;
  std::istringstream ss(csv1);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.rfind("rate_target", 0) != 0)
      ++data_rows;
  CHECK(data_rows == 3 * 10 * 4);
}

TEST_CASE("sweep: config validation failures exit with code 2") {
  const std::string config_path = tmp_path("bad_config.json");
  std::ofstream(config_path) << R"({
    "num_users": 2, "num_tx_antennas": 2,
    "rate_grid": [1.0, 0.5], "trials": 5, "master_seed": 1,
    "methods": ["random"]})";
  CHECK(run("sweep --config " + config_path).exit_code == 2);
  CHECK(run("sweep --config /nonexistent.json").exit_code == 4);
}
