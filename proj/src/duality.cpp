#include "dpc/duality.hpp"

#include <cmath>
#include <stdexcept>

namespace dpc {

DownlinkSolution mac_to_bc(const ProblemInstance& inst,
                           const PrecodingOrder& order,
                           const PowerAllocation& p) {
  inst.validate();
  const int m_users = inst.num_users;
  if (!order.is_valid_for(m_users))
    throw std::invalid_argument("mac_to_bc: invalid permutation");

  std::vector<double> q(m_users);
  for (int m = 0; m < m_users; ++m) q[m] = p.powers[order.perm[m]];
  const auto chain = interference_chain(inst, order, q);

  // Receive filters: u_m = normalize(Z_{m+1}^{-1} h_{perm[m]}).
  std::vector<CVec> u(m_users);
  std::vector<double> gamma(m_users);  // uplink SINRs, by position
  for (int m = 0; m < m_users; ++m) {
    const CVec& h = inst.channels[order.perm[m]];
    Eigen::LLT<CMat> llt(chain[m + 1]);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("mac_to_bc: Z-chain not positive definite");
    CVec w = llt.solve(h);
    const double gain = h.dot(w).real();
    u[m] = w / w.norm();
    gamma[m] = q[m] * gain;
  }

  // Downlink powers: forward substitution on the triangular duality system
  //   ptilde_m * |u_m^H h_m|^2 / gamma_m - sum_{n<m} ptilde_n |u_n^H h_m|^2 = 1.
  std::vector<double> ptilde(m_users, 0.0);
  for (int m = 0; m < m_users; ++m) {
    if (gamma[m] <= 0.0) continue;  // zero-rate user, transparent
    const CVec& h = inst.channels[order.perm[m]];
    double interference = 1.0;
    for (int n = 0; n < m; ++n) {
      const double cross = std::norm(u[n].dot(h));
      interference += ptilde[n] * cross;
    }
    const double own = std::norm(u[m].dot(h));
    if (own <= 0.0)
      throw std::runtime_error("mac_to_bc: singular duality system");
    ptilde[m] = gamma[m] * interference / own;
  }

  DownlinkSolution dl;
  dl.order = order;
  dl.beams.beamformers.resize(m_users);
  dl.beams.downlink_powers.resize(m_users);
  for (int m = 0; m < m_users; ++m) {
    dl.beams.beamformers[order.perm[m]] = u[m];
    dl.beams.downlink_powers[order.perm[m]] = ptilde[m];
  }
  dl.achieved_sinrs = bc_sinr(inst, order, dl.beams);
  return dl;
}

std::vector<double> bc_sinr(const ProblemInstance& inst,
                            const PrecodingOrder& order,
                            const BeamformerSet& beams) {
  const int m_users = inst.num_users;
  std::vector<double> sinr(m_users, 0.0);
  for (int m = 0; m < m_users; ++m) {
    const int user = order.perm[m];
    const CVec& h = inst.channels[user];
    const double signal =
        beams.downlink_powers[user] * std::norm(beams.beamformers[user].dot(h));
    double denom = 1.0;
    for (int n = 0; n < m; ++n) {
      const int other = order.perm[n];
      denom += beams.downlink_powers[other] *
               std::norm(beams.beamformers[other].dot(h));
    }
    sinr[user] = signal / denom;
  }
  return sinr;
}

}  // namespace dpc
