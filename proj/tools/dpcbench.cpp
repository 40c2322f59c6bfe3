// dpcbench: sum-power minimization for the MISO downlink with DPC.
//
// Subcommands:
//   solve    run one or more solvers on a single instance, JSON report
//   certify  multiplier recursion + order-optimality verdict, JSON report
//   sweep    Monte Carlo method comparison over a rate grid, CSV output
//
// Exit codes: 0 success, 2 validation error, 3 solver non-convergence,
// 4 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dpc/duality.hpp"
#include "dpc/instance_io.hpp"
#include "dpc/ordering.hpp"
#include "dpc/relaxation.hpp"
#include "dpc/sweep.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

struct InstanceSource {
  std::string instance_path;
  std::string sample_spec;  // "M,NT,RATE,SEED"

  dpc::ProblemInstance load() const {
    if (!instance_path.empty()) return dpc::load_instance(instance_path);
    if (sample_spec.empty())
      throw std::invalid_argument("need --instance or --sample");
    std::istringstream ss(sample_spec);
    int m = 0, nt = 0;
    double rate = 0.0;
    std::uint64_t seed = 0;
    char c1, c2, c3;
    if (!(ss >> m >> c1 >> nt >> c2 >> rate >> c3 >> seed) || c1 != ',' ||
        c2 != ',' || c3 != ',')
      throw std::invalid_argument("--sample expects M,NT,RATE,SEED");
    return dpc::sample_rayleigh_instance(m, nt, rate, seed);
  }
};

json order_to_json(const dpc::PrecodingOrder& order) {
  json j = json::array();
  for (int u : order.perm) j.push_back(u + 1);  // 1-based externally
  return j;
}

dpc::PrecodingOrder order_from_string(const std::string& s, int m_users) {
  dpc::PrecodingOrder order;
  std::istringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) order.perm.push_back(std::stoi(tok) - 1);
  if (!order.is_valid_for(m_users))
    throw std::invalid_argument("--order must be a permutation of 1.." +
                                std::to_string(m_users));
  return order;
}

json fixed_order_report(const dpc::ProblemInstance& inst,
                        const dpc::FixedOrderSolution& sol) {
  json j;
  j["order"] = order_to_json(sol.order);
  j["powers"] = sol.powers.powers;
  j["sum_power"] = sol.powers.sum_power;
  j["rates"] = sol.achieved_rates;
  const auto lambda = dpc::lagrange_multipliers(inst, sol);
  const auto cert = dpc::certify(lambda);
  j["multipliers"] = lambda;
  j["verdict"] = dpc::to_string(cert.verdict);
  return j;
}

int cmd_solve(const InstanceSource& src, const std::vector<std::string>& methods,
              double tol, int max_iters) {
  const dpc::ProblemInstance inst = src.load();
  json report;
  report["num_users"] = inst.num_users;
  report["num_tx_antennas"] = inst.num_tx_antennas;
  report["rate_targets"] = inst.rate_targets;
  bool converged = true;

  for (const auto& method : methods) {
    if (method == "random") {
      report["random"] =
          fixed_order_report(inst, dpc::random_order_baseline(inst, 1));
    } else if (method == "heuristic") {
      auto res = dpc::heuristic_search(
          inst, dpc::PrecodingOrder::identity(inst.num_users));
      json j = fixed_order_report(inst, res.solution);
      j["termination"] = dpc::to_string(res.trace.reason);
      j["iterations"] = res.trace.sum_powers.size();
      report["heuristic"] = std::move(j);
    } else if (method == "exhaustive") {
      auto [order, sol] = dpc::exhaustive_search(inst);
      report["exhaustive"] = fixed_order_report(inst, sol);
    } else if (method == "relaxation") {
      dpc::RelaxationParams params;
      params.tol = tol;
      params.max_iters = max_iters;
      auto sol = dpc::ellipsoid_solve(inst, params);
      json j;
      j["sum_power"] = sol.sum_power;
      j["powers"] = sol.powers.powers;
      j["rates"] = sol.achieved_rates;
      j["multipliers"] = sol.multipliers;
      j["iterations"] = sol.iterations;
      j["dual_value"] = sol.dual_value;
      j["dual_gap_bound"] = sol.dual_gap_bound;
      j["converged"] = sol.converged;
      if (sol.time_sharing) {
        json ts;
        ts["weights"] = sol.time_sharing->weights;
        ts["orders"] = json::array();
        for (const auto& o : sol.time_sharing->orders)
          ts["orders"].push_back(order_to_json(o));
        j["time_sharing"] = std::move(ts);
      }
      converged = converged && sol.converged;
      report["relaxation"] = std::move(j);
    } else {
      throw std::invalid_argument("unknown method: " + method);
    }
  }
  std::cout << report.dump(2) << "\n";
  return converged ? kExitOk : kExitNoConvergence;
}

int cmd_certify(const InstanceSource& src, const std::string& order_spec) {
  const dpc::ProblemInstance inst = src.load();
  const dpc::PrecodingOrder order =
      order_from_string(order_spec, inst.num_users);
  const auto sol = dpc::solve_fixed_order(inst, order);
  const auto lambda = dpc::lagrange_multipliers(inst, sol);
  const auto cert = dpc::certify(lambda);
  json j;
  j["order"] = order_to_json(order);
  j["multipliers"] = lambda;
  j["verdict"] = dpc::to_string(cert.verdict);
  j["tie_positions"] = cert.tie_positions;
  j["sum_power"] = sol.powers.sum_power;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_override,
              int threads_override) {
  dpc::SweepConfig config = dpc::load_sweep_config(config_path);
  if (!out_override.empty()) config.output_path = out_override;
  if (threads_override > 0) config.threads = threads_override;
  const auto rows = dpc::run_sweep(config);
  const std::string csv = dpc::sweep_to_csv(config, rows);
  if (config.output_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out)
      throw std::ios_base::failure("cannot write " + config.output_path);
    out << csv;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum sum power, beamformers and DPC order for the MISO "
               "downlink with per-user rate targets"};
  app.require_subcommand(1);

  InstanceSource src;
  std::vector<std::string> methods = {"relaxation"};
  std::string order_spec;
  std::string config_path;
  std::string out_path;
  double tol = 1e-6;
  int max_iters = 2000;
  int threads = 0;

  auto* solve = app.add_subcommand("solve", "solve one instance");
  solve->add_option("--instance", src.instance_path, "instance JSON file");
  solve->add_option("--sample", src.sample_spec,
                    "sample a Rayleigh instance: M,NT,RATE,SEED");
  solve->add_option("--method", methods,
                    "random|heuristic|exhaustive|relaxation")
      ->delimiter(',');
  solve->add_option("--tol", tol, "relaxation dual-gap tolerance");
  solve->add_option("--max-iters", max_iters, "ellipsoid iteration cap");

  auto* certify = app.add_subcommand("certify", "certify a DPC order");
  certify->add_option("--instance", src.instance_path, "instance JSON file");
  certify->add_option("--sample", src.sample_spec,
                      "sample a Rayleigh instance: M,NT,RATE,SEED");
  certify->add_option("--order", order_spec, "comma-separated 1-based users")
      ->required();

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo method comparison");
  sweep->add_option("--config", config_path, "sweep config JSON")->required();
  sweep->add_option("--out", out_path, "CSV output path (default stdout)");
  sweep->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(src, methods, tol, max_iters);
    if (certify->parsed()) return cmd_certify(src, order_spec);
    return cmd_sweep(config_path, out_path, threads);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
}
