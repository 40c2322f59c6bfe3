#pragma once

#include "dpc/instance.hpp"

namespace dpc {

// Result of the closed-form backward recursion for a fixed DPC order.
// z_chain[k] = I + sum_{i=k}^{M-1} p_{perm[i]} h h^H (z_chain[M] = I), kept
// for certificate and duality use.
struct FixedOrderSolution {
  PrecodingOrder order;
  PowerAllocation powers;              // indexed by user
  std::vector<double> achieved_rates;  // indexed by user, bits
  std::vector<CMat> z_chain;
};

// Minimum sum power meeting the rate targets under the given order.
// Backward recursion from the last order position:
//   p_{perm[m]} = (2^{target_{perm[m]}} - 1) / (h^H Z_{m+1}^{-1} h),
// updating Z_m = Z_{m+1} + p h h^H.  All rate constraints are tight at the
// output.
FixedOrderSolution solve_fixed_order(const ProblemInstance& inst,
                                     const PrecodingOrder& order);

double sum_power(const FixedOrderSolution& sol);

}  // namespace dpc
