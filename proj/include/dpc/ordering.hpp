#pragma once

#include <cstdint>
#include <utility>

#include "dpc/certificate.hpp"

namespace dpc {

enum class StopReason {
  CertificateOptimal,
  CertificateBoundary,
  VertexRevisited,
  IterationCap,
};

const char* to_string(StopReason r);

struct HeuristicTrace {
  std::vector<PrecodingOrder> visited;  // duplicates only as the final revisit
  std::vector<std::vector<double>> multipliers;
  std::vector<double> sum_powers;
  StopReason reason = StopReason::IterationCap;
};

struct HeuristicResult {
  PrecodingOrder order;  // best (lowest sum power) visited order
  FixedOrderSolution solution;
  DualCertificate certificate;
  HeuristicTrace trace;
};

// Solves every permutation and returns the minimum sum power order.  Ties
// within rel. 1e-10 break to the lexicographically smallest permutation.
// Refuses M > 8.
std::pair<PrecodingOrder, FixedOrderSolution> exhaustive_search(
    const ProblemInstance& inst);

// Certificate-driven resorting: solve the current order, compute the
// multipliers, re-sort users by ascending multiplier (stable, preserving
// the incumbent relative order on ties), stop on an Optimal/Boundary
// certificate, a revisited order, or the iteration cap (default 2*M).
HeuristicResult heuristic_search(const ProblemInstance& inst,
                                 const PrecodingOrder& initial_order,
                                 int max_iters = 0);

// Uniformly random (seeded) order solved in closed form.
FixedOrderSolution random_order_baseline(const ProblemInstance& inst,
                                         std::uint64_t seed);

}  // namespace dpc
