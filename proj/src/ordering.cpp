#include "dpc/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace dpc {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::CertificateOptimal: return "CertificateOptimal";
    case StopReason::CertificateBoundary: return "CertificateBoundary";
    case StopReason::VertexRevisited: return "VertexRevisited";
    case StopReason::IterationCap: return "IterationCap";
  }
  return "?";
}

std::pair<PrecodingOrder, FixedOrderSolution> exhaustive_search(
    const ProblemInstance& inst) {
  const int m_users = inst.num_users;
  if (m_users > 8)
    throw std::invalid_argument("exhaustive_search: M <= 8 required");
  PrecodingOrder order = PrecodingOrder::identity(m_users);
  PrecodingOrder best_order = order;
  FixedOrderSolution best = solve_fixed_order(inst, order);
  // Permutations enumerate in lexicographic order, so keeping the first
  // minimizer realizes the lexicographic tie-break.
  while (std::next_permutation(order.perm.begin(), order.perm.end())) {
    FixedOrderSolution sol = solve_fixed_order(inst, order);
    const double tie = 1e-10 * std::max(1.0, best.powers.sum_power);
    if (sol.powers.sum_power < best.powers.sum_power - tie) {
      best = std::move(sol);
      best_order = order;
    }
  }
  return {best_order, std::move(best)};
}

HeuristicResult heuristic_search(const ProblemInstance& inst,
                                 const PrecodingOrder& initial_order,
                                 int max_iters) {
  const int m_users = inst.num_users;
  if (!initial_order.is_valid_for(m_users))
    throw std::invalid_argument("heuristic_search: invalid initial order");
  if (max_iters <= 0) max_iters = 2 * m_users;

  HeuristicResult res;
  std::set<std::vector<int>> seen;
  PrecodingOrder order = initial_order;
  double best_power = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < max_iters; ++iter) {
    seen.insert(order.perm);
    FixedOrderSolution sol = solve_fixed_order(inst, order);
    const auto lambda = lagrange_multipliers(inst, sol);
    DualCertificate cert = certify(lambda);

    res.trace.visited.push_back(order);
    res.trace.multipliers.push_back(lambda);
    res.trace.sum_powers.push_back(sol.powers.sum_power);

    if (sol.powers.sum_power < best_power) {
      best_power = sol.powers.sum_power;
      res.order = order;
      res.solution = std::move(sol);
      res.certificate = cert;
    }

    if (cert.verdict == Verdict::Optimal) {
      res.trace.reason = StopReason::CertificateOptimal;
      return res;
    }
    if (cert.verdict == Verdict::TimeSharingBoundary) {
      res.trace.reason = StopReason::CertificateBoundary;
      return res;
    }

    // Next order: users re-sorted by ascending multiplier, stable in the
    // incumbent position order.
    std::vector<int> pos(m_users);
    std::iota(pos.begin(), pos.end(), 0);
    std::stable_sort(pos.begin(), pos.end(),
                     [&](int a, int b) { return lambda[a] < lambda[b]; });
    PrecodingOrder next;
    next.perm.resize(m_users);
    for (int k = 0; k < m_users; ++k) next.perm[k] = order.perm[pos[k]];

    if (seen.count(next.perm)) {
      res.trace.visited.push_back(next);
      res.trace.reason = StopReason::VertexRevisited;
      return res;
    }
    order = next;
  }
  res.trace.reason = StopReason::IterationCap;
  return res;
}

FixedOrderSolution random_order_baseline(const ProblemInstance& inst,
                                         std::uint64_t seed) {
  const int m_users = inst.num_users;
  PrecodingOrder order = PrecodingOrder::identity(m_users);
  std::mt19937_64 eng(seed);
  // Fisher-Yates with explicit modulo draw; std::shuffle's draw sequence is
  // implementation-defined.
  for (int i = m_users - 1; i > 0; --i) {
    const int j = static_cast<int>(eng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order.perm[i], order.perm[j]);
  }
  return solve_fixed_order(inst, order);
}

}  // namespace dpc
