#pragma once

#include <optional>

#include "dpc/fixed_order.hpp"

namespace dpc {

struct TimeSharing {
  std::vector<PrecodingOrder> orders;
  std::vector<double> weights;  // nonnegative, sum to 1
};

struct RelaxationSolution {
  std::vector<double> multipliers;     // indexed by user, per-bit units
  PowerAllocation powers;              // indexed by user
  std::vector<double> achieved_rates;  // indexed by user, bits (weighted if
                                       // time-sharing)
  double sum_power = 0.0;
  std::optional<TimeSharing> time_sharing;
  int iterations = 0;
  int restarts = 0;
  double dual_gap_bound = 0.0;
  double dual_value = 0.0;
  bool converged = false;
};

struct RelaxationParams {
  double tol = 1e-6;        // relative dual gap
  int max_iters = 2000;     // ellipsoid iterations
  double inner_tol = 1e-9;  // inner KKT residual
  double feas_tol = 1e-7;   // bits
  double tie_tol = 1e-5;    // relative, for time-sharing enumeration
};

// Initial-ellipsoid sizing bound: lambda_m^max = ln2 * 2^{sum targets} /
// ||h_m||^2 (rate price if user m carried the whole budget alone).  The
// solver doubles it and restarts if the optimum lands near the boundary.
std::vector<double> lambda_upper_bound(const ProblemInstance& inst);

struct InnerResult {
  PrecodingOrder order;        // ascending-multiplier decoding order
  PowerAllocation powers;      // indexed by user
  std::vector<double> rates;   // indexed by user, bits
  double objective = 0.0;      // max of F(p)
  double residual = 0.0;       // KKT residual at exit
  int iterations = 0;
  bool converged = false;
};

// Weighted-rate-minus-power maximization at fixed multipliers: sorts users
// by ascending lambda, maximizes F(p) = sum_m delta_m log2|Z_m| - sum p
// (delta_m the consecutive multiplier differences) by projected gradient
// ascent with Armijo backtracking.  warm_start, when given, is a
// user-indexed power vector.
InnerResult dual_inner_maximize(const ProblemInstance& inst,
                                const std::vector<double>& lambda, double tol,
                                const std::vector<double>* warm_start = nullptr);

// Constraint slack nu_m = R_m - target_m (ellipsoid cut direction).
std::vector<double> rate_subgradient(const std::vector<double>& rates,
                                     const std::vector<double>& targets);

// Algorithm: central-cut ellipsoid maximization of the concave dual over
// lambda >= 0, followed by primal recovery (closed-form fixed-order polish
// when a single order attains the optimum, Newton polish on the active
// nested constraints plus a vertex-weight decomposition otherwise).
RelaxationSolution ellipsoid_solve(const ProblemInstance& inst,
                                   const RelaxationParams& params = {});

// At fixed powers, enumerates decoding orders consistent with the ascending
// multiplier sort (permuting only inside tie groups), and finds the
// sparsest nonnegative weights over the corresponding rate vertices whose
// combination meets the targets within tol.  Throws std::runtime_error if
// no decomposition exists at the given tolerance.
TimeSharing recover_time_sharing(const ProblemInstance& inst,
                                 const PowerAllocation& p,
                                 const std::vector<double>& lambda,
                                 const std::vector<double>& targets,
                                 double tol, double tie_tol = 1e-5);

}  // namespace dpc
