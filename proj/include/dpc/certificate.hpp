#pragma once

#include "dpc/fixed_order.hpp"

namespace dpc {

enum class Verdict { Optimal, NotOptimal, TimeSharingBoundary };

const char* to_string(Verdict v);

struct DualCertificate {
  // Multipliers by order position, natural-log rate units (sensitivity of
  // minimum sum power to the rate target of the user at that position,
  // measured in nats).
  std::vector<double> multipliers;
  Verdict verdict = Verdict::NotOptimal;
  // Positions m (1-based pair index, i.e. m in 2..M mapped to 0-based m-1)
  // where consecutive multipliers tie within tolerance.
  std::vector<int> tie_positions;
};

// Forward recursion for the KKT multipliers of the fixed-order problem:
//   lambda_m = [1 - h^H (sum_{n<m} lambda_n (Z_n^{-1} - Z_{n+1}^{-1})) h]
//              / (h^H Z_m^{-1} h)
// with h the channel of the user at position m.  All matrix applications
// are Hermitian solves on the solution's Z-chain.
std::vector<double> lagrange_multipliers(const ProblemInstance& inst,
                                         const FixedOrderSolution& sol);

// Verdict from the sign pattern of consecutive multiplier differences,
// normalized by lambda_1:
//   Optimal             iff lambda_m - lambda_{m-1} > tie_tol for all m;
//   TimeSharingBoundary iff all differences >= -tie_tol and at least one
//                       lies within tie_tol of zero;
//   NotOptimal          otherwise.  M = 1 is always Optimal.
DualCertificate certify(const std::vector<double>& multipliers,
                        double tie_tol = 1e-7);

}  // namespace dpc
