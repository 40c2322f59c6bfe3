#include "dpc/fixed_order.hpp"

#include <cmath>
#include <stdexcept>

namespace dpc {

FixedOrderSolution solve_fixed_order(const ProblemInstance& inst,
                                     const PrecodingOrder& order) {
  inst.validate();
  const int m_users = inst.num_users;
  if (!order.is_valid_for(m_users))
    throw std::invalid_argument("solve_fixed_order: invalid permutation");
  const int nt = inst.num_tx_antennas;

  FixedOrderSolution sol;
  sol.order = order;
  sol.z_chain.resize(m_users + 1);
  sol.z_chain[m_users] = CMat::Identity(nt, nt);
  std::vector<double> powers(m_users, 0.0);

  for (int m = m_users - 1; m >= 0; --m) {
    const int user = order.perm[m];
    const CVec& h = inst.channels[user];
    const double gamma = sinr_from_rate(inst.rate_targets[user]);
    const double gain = effective_gain(h, sol.z_chain[m + 1]);
    const double p = gamma / gain;  // zero target -> zero power
    powers[user] = p;
    sol.z_chain[m] = sol.z_chain[m + 1] + p * (h * h.adjoint());
  }

  sol.powers = PowerAllocation::from(std::move(powers));
  sol.achieved_rates = mac_rates(inst, order, sol.powers);
  return sol;
}

double sum_power(const FixedOrderSolution& sol) { return sol.powers.sum_power; }

}  // namespace dpc
