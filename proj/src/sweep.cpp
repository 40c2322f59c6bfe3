#include "dpc/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "dpc/ordering.hpp"
#include "dpc/relaxation.hpp"

namespace dpc {

using nlohmann::json;

namespace {

const std::vector<std::string> kKnownMethods = {"random", "heuristic",
                                                "exhaustive", "relaxation"};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SweepRow run_method(const ProblemInstance& inst, const std::string& method,
                    std::uint64_t seed, const SweepConfig& config) {
  SweepRow row;
  row.method = method;
  row.seed = seed;
  const auto t0 = std::chrono::steady_clock::now();
  if (method == "random") {
    auto sol = random_order_baseline(inst, splitmix64(seed ^ 0x5eedull));
    row.sum_power = sol.powers.sum_power;
    row.iterations = 1;
    row.termination = "ClosedForm";
  } else if (method == "heuristic") {
    auto res = heuristic_search(inst, PrecodingOrder::identity(inst.num_users));
    row.sum_power = res.solution.powers.sum_power;
    row.iterations = static_cast<int>(res.trace.sum_powers.size());
    row.termination = to_string(res.trace.reason);
  } else if (method == "exhaustive") {
    auto [order, sol] = exhaustive_search(inst);
    row.sum_power = sol.powers.sum_power;
    int fact = 1;
    for (int i = 2; i <= inst.num_users; ++i) fact *= i;
    row.iterations = fact;
    row.termination = "ClosedForm";
  } else if (method == "relaxation") {
    RelaxationParams params;
    params.tol = config.tol;
    params.max_iters = config.max_iters;
    auto sol = ellipsoid_solve(inst, params);
    row.sum_power = sol.sum_power;
    row.iterations = sol.iterations;
    row.termination = sol.converged ? "Converged" : "IterationCap";
    row.time_sharing = sol.time_sharing.has_value();
  } else {
    throw std::invalid_argument("unknown method: " + method);
  }
  const auto t1 = std::chrono::steady_clock::now();
  if (config.record_timing)
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  row.sum_power_db = 10.0 * std::log10(row.sum_power);
  return row;
}

}  // namespace

void SweepConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("sweep: trials >= 1 required");
  if (num_users < 1 || num_tx_antennas < 1)
    throw std::invalid_argument("sweep: M >= 1 and nT >= 1 required");
  if (rate_grid.empty())
    throw std::invalid_argument("sweep: empty rate grid");
  for (std::size_t i = 0; i < rate_grid.size(); ++i) {
    if (rate_grid[i] <= 0.0)
      throw std::invalid_argument("sweep: rate grid must be strictly positive");
    if (i > 0 && rate_grid[i] <= rate_grid[i - 1])
      throw std::invalid_argument("sweep: rate grid must be increasing");
  }
  if (methods.empty())
    throw std::invalid_argument("sweep: no methods selected");
  for (const auto& m : methods) {
    if (std::find(kKnownMethods.begin(), kKnownMethods.end(), m) ==
        kKnownMethods.end())
      throw std::invalid_argument("sweep: unknown method \"" + m + "\"");
    if (m == "exhaustive" && num_users > 8)
      throw std::invalid_argument("sweep: exhaustive requires M <= 8");
  }
  if (threads < 1) throw std::invalid_argument("sweep: threads >= 1 required");
}

SweepConfig sweep_config_from_json(const json& j) {
  SweepConfig c;
  try {
    c.num_users = j.at("num_users").get<int>();
    c.num_tx_antennas = j.at("num_tx_antennas").get<int>();
    c.rate_grid = j.at("rate_grid").get<std::vector<double>>();
    c.trials = j.at("trials").get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    c.methods = j.at("methods").get<std::vector<std::string>>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<int>();
    if (j.contains("record_timing"))
      c.record_timing = j["record_timing"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("output")) c.output_path = j["output"].get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("sweep: malformed config: ") +
                                e.what());
  }
  c.validate();
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::invalid_argument("sweep: config parse error in " + path + ": " +
                                e.what());
  }
  return sweep_config_from_json(j);
}

std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                std::size_t grid_index,
                                std::size_t trial_index) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(grid_index));
  s = splitmix64(s ^ static_cast<std::uint64_t>(trial_index));
  return s;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  config.validate();
  const std::size_t n_grid = config.rate_grid.size();
  const std::size_t n_trials = static_cast<std::size_t>(config.trials);
  const std::size_t n_methods = config.methods.size();
  std::vector<SweepRow> rows(n_grid * n_trials * n_methods);

  auto work = [&](std::size_t cell) {
    const std::size_t g = cell / n_trials;
    const std::size_t t = cell % n_trials;
    const std::uint64_t seed = derive_trial_seed(config.master_seed, g, t);
    const ProblemInstance inst =
        sample_rayleigh_instance(config.num_users, config.num_tx_antennas,
                                 config.rate_grid[g], seed);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      SweepRow row = run_method(inst, config.methods[mi], seed, config);
      row.rate_target = config.rate_grid[g];
      row.trial = static_cast<int>(t);
      rows[(g * n_trials + t) * n_methods + mi] = std::move(row);
    }
  };

  const std::size_t n_cells = n_grid * n_trials;
  if (config.threads <= 1) {
    for (std::size_t c = 0; c < n_cells; ++c) work(c);
  } else {
    // Deterministic by construction: rows land at precomputed indices.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(config.threads);
    for (int w = 0; w < config.threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t c = w; c < n_cells; c += config.threads) work(c);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::string sweep_to_csv(const SweepConfig& config,
                         const std::vector<SweepRow>& rows) {
  std::string out =
      "rate_target,method,trial,seed,sum_power,sum_power_db,iterations,"
      "termination,time_sharing,wall_time_ms\n";
  for (const auto& r : rows) {
    out += fmt_double(r.rate_target) + "," + r.method + "," +
           std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
           fmt_double(r.sum_power) + "," + fmt_double(r.sum_power_db) + "," +
           std::to_string(r.iterations) + "," + r.termination + "," +
           (r.time_sharing ? "1" : "0") + "," + fmt_double(r.wall_time_ms) +
           "\n";
  }
  // Summary: average linear sum power per (grid point, method), in dB.
  out += "# summary: rate_target,method,avg_sum_power_db\n";
  for (double rate : config.rate_grid) {
    for (const auto& method : config.methods) {
      double acc = 0.0;
      long count = 0;
      for (const auto& r : rows) {
        if (r.rate_target == rate && r.method == method) {
          acc += r.sum_power;
          ++count;
        }
      }
      const double avg_db = 10.0 * std::log10(acc / static_cast<double>(count));
      out += "# " + fmt_double(rate) + "," + method + "," + fmt_double(avg_db) +
             "\n";
    }
  }
  return out;
}

}  // namespace dpc
