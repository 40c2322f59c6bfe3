#include "dpc/certificate.hpp"

#include <cmath>
#include <stdexcept>

namespace dpc {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Optimal: return "Optimal";
    case Verdict::NotOptimal: return "NotOptimal";
    case Verdict::TimeSharingBoundary: return "TimeSharingBoundary";
  }
  return "?";
}

std::vector<double> lagrange_multipliers(const ProblemInstance& inst,
                                         const FixedOrderSolution& sol) {
  const int m_users = inst.num_users;
  if (static_cast<int>(sol.z_chain.size()) != m_users + 1)
    throw std::invalid_argument("lagrange_multipliers: inconsistent Z-chain");

  std::vector<Eigen::LLT<CMat>> llt(m_users + 1);
  for (int k = 0; k <= m_users; ++k) {
    llt[k].compute(sol.z_chain[k]);
    if (llt[k].info() != Eigen::Success)
      throw std::runtime_error("lagrange_multipliers: Z-chain not positive definite");
  }

  // quad[k] = h_m^H Z_{k (0-based chain index)}^{-1} h_m for the current h_m.
  std::vector<double> lambda(m_users, 0.0);
  for (int m = 0; m < m_users; ++m) {
    const CVec& h = inst.channels[sol.order.perm[m]];
    std::vector<double> quad(m + 2);
    for (int k = 0; k <= m + 1; ++k) quad[k] = h.dot(llt[k].solve(h)).real();
    double correction = 0.0;
    for (int n = 0; n < m; ++n) correction += lambda[n] * (quad[n] - quad[n + 1]);
    lambda[m] = (1.0 - correction) / quad[m];
  }
  return lambda;
}

DualCertificate certify(const std::vector<double>& multipliers, double tie_tol) {
  if (multipliers.empty())
    throw std::invalid_argument("certify: empty multiplier vector");
  DualCertificate cert;
  cert.multipliers = multipliers;
  const int m_users = static_cast<int>(multipliers.size());
  if (m_users == 1) {
    cert.verdict = Verdict::Optimal;
    return cert;
  }
  const double scale = std::max(std::abs(multipliers[0]), 1e-300);
  bool all_strict = true;
  bool all_nonneg = true;
  bool any_tie = false;
  for (int m = 1; m < m_users; ++m) {
    const double d = (multipliers[m] - multipliers[m - 1]) / scale;
    if (d <= tie_tol) all_strict = false;
    if (d < -tie_tol) all_nonneg = false;
    if (std::abs(d) <= tie_tol) {
      any_tie = true;
      cert.tie_positions.push_back(m);
    }
  }
  if (all_strict)
    cert.verdict = Verdict::Optimal;
  else if (all_nonneg && any_tie)
    cert.verdict = Verdict::TimeSharingBoundary;
  else
    cert.verdict = Verdict::NotOptimal;
  return cert;
}

}  // namespace dpc
